#pragma once

#include <iosfwd>
#include <string>

#include "bcc/code.hpp"

namespace bcc {

// Standard alist text interchange for the parity-check matrix (dimensions,
// per-column/per-row degree lists, 1-based index lists, zero-padded rows).
// The protection-class index sets, seed and profile travel in a JSON sidecar
// because alist has no room for them.

void write_alist(const UepCode& code, std::ostream& out);
void write_sidecar(const UepCode& code, std::ostream& out, const std::string& spec_hash = "");

UepCode load_uep_code(std::istream& alist_in, std::istream& sidecar_in);

void save_uep_code(const UepCode& code, const std::string& alist_path,
                   const std::string& sidecar_path, const std::string& spec_hash = "");
UepCode load_uep_code_files(const std::string& alist_path, const std::string& sidecar_path);

}  // namespace bcc
