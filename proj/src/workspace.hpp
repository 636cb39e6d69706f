#pragma once

#include <json.hpp>

#include "examples.hpp"
#include "generation.hpp"

namespace scalex {

using Json = nlohmann::ordered_json;

/// In-memory form of a workspace file. Serialization is canonical: the
/// serializer always emits the explicit long forms in a fixed key order, so
/// files produced by it round-trip byte-for-byte.
struct Workspace {
  std::vector<std::string> field_names;  // file order
  std::map<std::string, FieldPtr> fields;
  std::vector<std::string> category_names;
  std::map<std::string, FiniteDgCategory> categories;

  struct NamedTwisted {
    std::string name, category;
    TwistedComplex t;
  };
  std::vector<NamedTwisted> twisted;

  struct NamedStructure {
    std::string name, category;
    std::string extension;  // field name
    ModuleStructure s;
  };
  std::vector<NamedStructure> structures;

  struct Task {
    std::string name, command;
    Json args;
  };
  std::vector<Task> tasks;

  FieldPtr field(const std::string& name) const;
  const FiniteDgCategory& category(const std::string& name) const;
  const NamedTwisted* find_twisted(const std::string& name) const;
  const NamedStructure* find_structure(const std::string& name) const;
};

/// Throws Error(input_error) with a path message on schema violations.
Workspace parse_workspace(const std::string& text);
std::string serialize_workspace(const Workspace& ws);

// --- piecewise (de)serialization, shared with witnesses and reports ---
Json matrix_to_json(const FieldPtr& F, const Mat& m);
Mat matrix_from_json(const FieldPtr& F, int rows, int cols, const Json& j,
                     const std::string& path);
Json twisted_to_json(const FiniteDgCategory& a, const TwistedComplex& t);
TwistedComplex twisted_from_json(const FiniteDgCategory& a, const Json& j,
                                 const std::string& path);
Json morphism_to_json(const FiniteDgCategory& a, const TwMorphism& u);
/// Component shapes are fixed by (src, dst, degree); coords lengths checked.
TwMorphism morphism_from_json(const FiniteDgCategory& a, const TwistedComplex& src,
                              const TwistedComplex& dst, const Json& j,
                              const std::string& path);
Json witness_to_json(const FiniteDgCategory& a, const GenerationWitness& w);
/// The generator fixes the comparison-object shapes of level-1 nodes.
GenerationWitness witness_from_json(const FiniteDgCategory& a, const TwistedComplex& generator,
                                    const Json& j, const std::string& path);

std::uint64_t fnv1a64(const std::string& s);

/// Standalone witness file: category reference, inline generator, witness
/// tree, and a digest over the canonical dump of those three.
std::string witness_file_text(const FiniteDgCategory& a, const std::string& category_name,
                              const TwistedComplex& generator, const GenerationWitness& w);
struct WitnessFile {
  std::string category;
  TwistedComplex generator;
  GenerationWitness witness;
  bool digest_ok = false;
};
WitnessFile parse_witness_file(const Workspace& ws, const std::string& text);

/// Minimal workspace holding one example category over a named base field
/// ("Q" or "Fp" for prime p).
std::string build_example_workspace(const std::string& name, const std::string& field,
                                    int n);
/// Shipped preset workspaces (complete with extensions, structures, twisted
/// complexes and tasks); these are the files under share/workspaces.
std::string preset_workspace(const std::string& preset);
std::vector<std::string> preset_names();

}  // namespace scalex
