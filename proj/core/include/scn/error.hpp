#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scn {

/// Base of every error raised by the library. `name()` is the stable error
/// identifier reported in CLI summaries.
class Error : public std::runtime_error {
 public:
  Error(std::string_view name, const std::string& message)
      : std::runtime_error(message), name_(name) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

#define SCN_DEFINE_ERROR(Type)                                      \
  class Type : public Error {                                       \
   public:                                                          \
    explicit Type(const std::string& message) : Error(#Type, message) {} \
  }

SCN_DEFINE_ERROR(SchemaError);
SCN_DEFINE_ERROR(GridAlignmentError);
SCN_DEFINE_ERROR(RangeError);
SCN_DEFINE_ERROR(OwnershipError);
SCN_DEFINE_ERROR(ComplexityError);
SCN_DEFINE_ERROR(HorizonError);
SCN_DEFINE_ERROR(Unsatisfiable);
SCN_DEFINE_ERROR(LengthError);
SCN_DEFINE_ERROR(ScheduleError);
SCN_DEFINE_ERROR(ValueError);
SCN_DEFINE_ERROR(IoError);

#undef SCN_DEFINE_ERROR

class DomainExceededError : public Error {
 public:
  DomainExceededError(const std::string& message, double t_sup)
      : Error("DomainExceededError", message), t_sup_(t_sup) {}

  double t_sup() const noexcept { return t_sup_; }

 private:
  double t_sup_;
};

class OutOfSpaceError : public Error {
 public:
  OutOfSpaceError(const std::string& message, std::string axis)
      : Error("OutOfSpaceError", message), axis_(std::move(axis)) {}

  const std::string& axis() const noexcept { return axis_; }

 private:
  std::string axis_;
};

class RejectionBudgetError : public Error {
 public:
  RejectionBudgetError(const std::string& message, double acceptance_rate)
      : Error("RejectionBudgetError", message), acceptance_rate_(acceptance_rate) {}

  double acceptance_rate() const noexcept { return acceptance_rate_; }

 private:
  double acceptance_rate_;
};

}  // namespace scn
