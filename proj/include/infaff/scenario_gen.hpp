#pragma once

#include <optional>
#include <string>

#include "infaff/dsl.hpp"
#include "infaff/random.hpp"

namespace infaff::dsl {

/// A random well-formed scenario text. Whitespace, blank lines and comments
/// are scrambled and some rationals are written unreduced ("2/4").
std::string random_scenario(Sampler& rng);

struct Mutation {
  std::string text;
  Position at;  // position of the mutated token in the original text
  std::string description;
};

/// Deletes, replaces or duplicates one non-newline token. The edit is padded
/// with spaces so neighbouring tokens never fuse.
Mutation mutate(const std::string& text, Sampler& rng);

}  // namespace infaff::dsl
