#ifndef MESHGRADE_MESH_IO_HPP
#define MESHGRADE_MESH_IO_HPP

#include <filesystem>
#include <optional>
#include <string>

#include "meshgrade/mesh.hpp"

namespace meshgrade {

inline constexpr const char* kMeshFormatTag = "meshgrade/v1";

struct ParsedMesh {
  Mesh mesh;
  std::optional<LabelSet> labels;
};

// Throws ParseError on malformed documents and on invariant violations
// (dangling node references, duplicate ids, bad arity); a returned mesh is
// always structurally valid.
ParsedMesh parse_mesh(const std::string& text);

// Lenient variant for auditing: document-shape problems still throw, but
// structural invariant violations land in findings and the mesh is
// returned as parsed.
ParsedMesh parse_mesh(const std::string& text, ValidationReport& findings);

// Deterministic: nodes, elements and labels emitted sorted by id, so equal
// inputs produce byte-identical documents.
std::string serialize_mesh(const Mesh& mesh,
                           const std::optional<LabelSet>& labels = {});

// Accepts v and f records; anything else is skipped. Indices are 1-based,
// faces of arity 3 or 4 only, no implicit triangulation.
Mesh import_obj(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path,
                     const std::string& content);

ParsedMesh load_mesh_file(const std::filesystem::path& path);

}  // namespace meshgrade

#endif
