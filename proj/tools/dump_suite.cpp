// Writes the handcrafted suite as problem files, one per problem, prefixed
// with the suite position so directory order matches suite order.
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "pathloop/pathloop.h"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: dump_suite <dir>\n";
    return 2;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);
  for (size_t i = 0; i < pl_suite_size(); ++i) {
    pl_problem* p = nullptr;
    char* json = nullptr;
    if (pl_suite_get(i, &p) != PL_OK || pl_problem_to_json(p, &json) != PL_OK) {
      std::cerr << pl_last_error_message() << "\n";
      return 4;
    }
    std::string stem;
    for (const char* c = pl_problem_name(p); *c; ++c) {
      stem += *c == ' ' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(*c)));
    }
    char prefix[8];
    std::snprintf(prefix, sizeof prefix, "%02zu_", i + 1);
    std::ofstream(dir / (prefix + stem + ".json"), std::ios::binary) << json;
    pl_string_free(json);
    pl_problem_free(p);
  }
  return 0;
}
