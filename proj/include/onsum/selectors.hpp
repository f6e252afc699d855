#pragma once

#include <string>

#include "onsum/function_handle.hpp"
#include "onsum/systems.hpp"

namespace onsum {

/// System selector grammar:
///   cosine | haar | walsh
///   cr:<base>                    compress-reflect of any selector
///   rand:<seed>:<count>:<gran>   seeded Gram-Schmidt step system
///   csv:<path>                   tabulated step system
/// Throws std::invalid_argument on anything else.
OrthonormalSystem parse_system(const std::string& selector);

/// Function selector grammar: the catalog names plus
///   phi:<system>:<k>     element k of a system selector
///   antideriv:<f>        prefix integral of another selector
FunctionHandle parse_function(const std::string& selector);

}  // namespace onsum
