#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ivt {

// Label spaces an AP can be reported on. I, V and T are the single
// components; IV and IT are instrument-anchored pairs; IVT is the triplet.
enum class ComponentKind { kI, kV, kT, kIV, kIT, kIVT };

inline constexpr std::array<ComponentKind, 6> kAllKinds = {
    ComponentKind::kI,  ComponentKind::kV,  ComponentKind::kT,
    ComponentKind::kIV, ComponentKind::kIT, ComponentKind::kIVT};

// Lower-case short name: "i", "v", "t", "iv", "it", "ivt".
std::string_view to_string(ComponentKind kind);
std::optional<ComponentKind> parse_component(std::string_view name);

struct TripletRow {
  int triplet = 0;
  int instrument = 0;
  int verb = 0;
  int target = 0;

  friend bool operator==(const TripletRow&, const TripletRow&) = default;
};

struct LabelSpaceSizes {
  int triplets = 100;
  int instruments = 6;
  int verbs = 10;
  int targets = 15;
};

// Immutable triplet -> (instrument, verb, target) decomposition table.
//
// Pair ids are laid out row-major with the instrument as the major index:
//   iv = instrument * verbs + verb
//   it = instrument * targets + target
class ComponentMap {
 public:
  // Validates and takes ownership of the rows; throws ivt::Error on a
  // duplicate id, an out-of-range component, or a row count that does not
  // match sizes.triplets. Rows may be given in any order.
  ComponentMap(LabelSpaceSizes sizes, std::vector<TripletRow> rows);

  // Parses the text form: one `triplet,instrument,verb,target` line per
  // triplet, `#` lines and blank lines ignored. When sizes are omitted they
  // are inferred as (row count, max id + 1) per component.
  static ComponentMap parse(std::istream& in,
                            std::optional<LabelSpaceSizes> sizes = {});
  static ComponentMap parse(std::string_view text,
                            std::optional<LabelSpaceSizes> sizes = {});
  static ComponentMap load(const std::string& path,
                           std::optional<LabelSpaceSizes> sizes = {});

  // The bundled CholecT45/CholecT50 map (100 triplets over 6/10/15).
  static const ComponentMap& cholect50();

  const LabelSpaceSizes& sizes() const noexcept { return sizes_; }
  int n_triplets() const noexcept { return sizes_.triplets; }
  const std::vector<TripletRow>& rows() const noexcept { return rows_; }
  const TripletRow& row(int triplet) const;

  // C_d for the given kind.
  int component_size(ComponentKind kind) const noexcept;
  // Class id of the triplet's kind-component; identity for kIVT.
  int component_of(int triplet, ComponentKind kind) const;

  // Text form accepted by parse().
  std::string to_text() const;

  friend bool operator==(const ComponentMap& a, const ComponentMap& b) {
    return a.rows_ == b.rows_ && a.sizes_.triplets == b.sizes_.triplets &&
           a.sizes_.instruments == b.sizes_.instruments &&
           a.sizes_.verbs == b.sizes_.verbs &&
           a.sizes_.targets == b.sizes_.targets;
  }

 private:
  LabelSpaceSizes sizes_;
  std::vector<TripletRow> rows_;  // indexed by triplet id
};

inline int component_size(const ComponentMap& map, ComponentKind kind) {
  return map.component_size(kind);
}

// Optional human-readable names for the bundled map.
struct ClassNames {
  std::vector<std::string> instruments;
  std::vector<std::string> verbs;
  std::vector<std::string> targets;
};
const ClassNames& cholect50_class_names();

// Text document of the bundled map, in the parse() format.
std::string_view cholect50_map_document();

}  // namespace ivt
