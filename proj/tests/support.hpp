#pragma once

#include <string>
#include <vector>

#include "honeycomb/learner.hpp"
#include "honeycomb/quotient.hpp"

namespace honeycomb::testing {

SchemaPtr torus();
SchemaPtr seifert_weber();
// Schema of the first one-cell free quotient over the given field.
SchemaPtr one_cell_quotient(const SchlafliSymbol& sym, unsigned prime, int degree = 1);

// Learned once per process and cached by symbol digits.
const Rts& learned(const SchemaPtr& schema);

// Number of lattice cubes at face-path distance k from the origin cube.
long long cubic_shell(int k);

std::string temp_path(const std::string& name);
void write_text(const std::string& path, const std::string& text);

int run_cli(const std::vector<std::string>& args, std::string* out = nullptr, std::string* err = nullptr);

}  // namespace honeycomb::testing
