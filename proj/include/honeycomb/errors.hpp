#pragma once

#include <stdexcept>
#include <string>

namespace honeycomb {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define HONEYCOMB_ERROR(Name)                  \
  class Name : public Error {                  \
   public:                                     \
    explicit Name(const std::string& what)     \
        : Error(std::string(#Name ": ") + what) {} \
  }

HONEYCOMB_ERROR(DivisionByZero);
HONEYCOMB_ERROR(FieldMismatch);
HONEYCOMB_ERROR(Singular);
HONEYCOMB_ERROR(CapExceeded);
HONEYCOMB_ERROR(InvalidSymbol);
HONEYCOMB_ERROR(DegenerateForm);
HONEYCOMB_ERROR(SearchFailed);
HONEYCOMB_ERROR(CycleOpen);
HONEYCOMB_ERROR(ParseError);
HONEYCOMB_ERROR(NoRoots);
HONEYCOMB_ERROR(LocalStructureViolation);
HONEYCOMB_ERROR(PrecisionAmbiguity);
HONEYCOMB_ERROR(NoParent);
HONEYCOMB_ERROR(PathNotFound);
HONEYCOMB_ERROR(InsufficientSamples);
HONEYCOMB_ERROR(DanglingClass);
HONEYCOMB_ERROR(BudgetExceeded);
HONEYCOMB_ERROR(ParentRuleViolation);
HONEYCOMB_ERROR(StateCapExceeded);
HONEYCOMB_ERROR(IterationCapExceeded);
HONEYCOMB_ERROR(SchemaMismatch);

#undef HONEYCOMB_ERROR

}  // namespace honeycomb
