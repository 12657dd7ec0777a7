#pragma once

#include <iosfwd>
#include <string>

#include "fracbpx/mesh.hpp"

namespace fracbpx {

// Text format "fracbpx-mesh v1"; coordinates at 17 significant digits.
void write_mesh(std::ostream& out, const Mesh& mesh);
void write_mesh(const std::string& path, const Mesh& mesh);

// A mesh whose boundary vertices all lie on the unit circle is read as a disk.
Mesh read_mesh(std::istream& in);
Mesh read_mesh(const std::string& path);

}  // namespace fracbpx
