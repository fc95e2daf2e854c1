#include "ivteval/label_space.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ivteval/error.hpp"

namespace ivt {

std::string_view to_string(ComponentKind kind) {
  switch (kind) {
    case ComponentKind::kI: return "i";
    case ComponentKind::kV: return "v";
    case ComponentKind::kT: return "t";
    case ComponentKind::kIV: return "iv";
    case ComponentKind::kIT: return "it";
    case ComponentKind::kIVT: return "ivt";
  }
  return "?";
}

std::optional<ComponentKind> parse_component(std::string_view name) {
  for (ComponentKind kind : kAllKinds) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

ComponentMap::ComponentMap(LabelSpaceSizes sizes, std::vector<TripletRow> rows)
    : sizes_(sizes) {
  if (sizes.triplets <= 0 || sizes.instruments <= 0 || sizes.verbs <= 0 ||
      sizes.targets <= 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "component map sizes must be positive");
  }
  if (static_cast<int>(rows.size()) != sizes.triplets) {
    throw Error(ErrorCode::kCountMismatch,
                "component map has " + std::to_string(rows.size()) +
                    " rows, expected " + std::to_string(sizes.triplets));
  }
  rows_.assign(rows.size(), TripletRow{-1, -1, -1, -1});
  for (const TripletRow& r : rows) {
    if (r.triplet < 0 || r.triplet >= sizes.triplets) {
      throw Error(ErrorCode::kOutOfRange,
                  "triplet id " + std::to_string(r.triplet) + " out of range");
    }
    if (r.instrument < 0 || r.instrument >= sizes.instruments ||
        r.verb < 0 || r.verb >= sizes.verbs || r.target < 0 ||
        r.target >= sizes.targets) {
      throw Error(ErrorCode::kOutOfRange,
                  "component index out of range for triplet " +
                      std::to_string(r.triplet));
    }
    if (rows_[r.triplet].triplet != -1) {
      throw Error(ErrorCode::kDuplicateId,
                  "duplicate triplet id " + std::to_string(r.triplet));
    }
    rows_[r.triplet] = r;
  }
}

namespace {

int parse_field(std::string_view field, int line_no) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) {
    field.remove_prefix(1);
  }
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' ||
                            field.back() == '\r')) {
    field.remove_suffix(1);
  }
  int value = 0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kMalformed,
                "map line " + std::to_string(line_no) + ": bad integer '" +
                    std::string(field) + "'");
  }
  return value;
}

}  // namespace

ComponentMap ComponentMap::parse(std::istream& in,
                                 std::optional<LabelSpaceSizes> sizes) {
  std::vector<TripletRow> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (view.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    if (view.front() == '#') continue;

    std::array<int, 4> fields{};
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = view.find(',', start);
      const std::string_view field = view.substr(
          start, comma == std::string_view::npos ? comma : comma - start);
      if (count == fields.size()) {
        throw Error(ErrorCode::kMalformed,
                    "map line " + std::to_string(line_no) +
                        ": expected 4 fields");
      }
      fields[count++] = parse_field(field, line_no);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (count != fields.size()) {
      throw Error(ErrorCode::kMalformed, "map line " +
                                             std::to_string(line_no) +
                                             ": expected 4 fields");
    }
    rows.push_back({fields[0], fields[1], fields[2], fields[3]});
  }

  if (!sizes) {
    LabelSpaceSizes inferred{static_cast<int>(rows.size()), 0, 0, 0};
    for (const TripletRow& r : rows) {
      inferred.instruments = std::max(inferred.instruments, r.instrument + 1);
      inferred.verbs = std::max(inferred.verbs, r.verb + 1);
      inferred.targets = std::max(inferred.targets, r.target + 1);
    }
    sizes = inferred;
  }
  return ComponentMap(*sizes, std::move(rows));
}

ComponentMap ComponentMap::parse(std::string_view text,
                                 std::optional<LabelSpaceSizes> sizes) {
  std::istringstream in{std::string(text)};
  return parse(in, sizes);
}

ComponentMap ComponentMap::load(const std::string& path,
                                std::optional<LabelSpaceSizes> sizes) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open map file " + path);
  return parse(in, sizes);
}

const TripletRow& ComponentMap::row(int triplet) const {
  if (triplet < 0 || triplet >= sizes_.triplets) {
    throw Error(ErrorCode::kOutOfRange,
                "triplet id " + std::to_string(triplet) + " out of range");
  }
  return rows_[triplet];
}

int ComponentMap::component_size(ComponentKind kind) const noexcept {
  switch (kind) {
    case ComponentKind::kI: return sizes_.instruments;
    case ComponentKind::kV: return sizes_.verbs;
    case ComponentKind::kT: return sizes_.targets;
    case ComponentKind::kIV: return sizes_.instruments * sizes_.verbs;
    case ComponentKind::kIT: return sizes_.instruments * sizes_.targets;
    case ComponentKind::kIVT: return sizes_.triplets;
  }
  return 0;
}

int ComponentMap::component_of(int triplet, ComponentKind kind) const {
  const TripletRow& r = row(triplet);
  switch (kind) {
    case ComponentKind::kI: return r.instrument;
    case ComponentKind::kV: return r.verb;
    case ComponentKind::kT: return r.target;
    case ComponentKind::kIV: return r.instrument * sizes_.verbs + r.verb;
    case ComponentKind::kIT: return r.instrument * sizes_.targets + r.target;
    case ComponentKind::kIVT: return r.triplet;
  }
  return -1;
}

std::string ComponentMap::to_text() const {
  std::ostringstream out;
  out << "# triplet_id,instrument_id,verb_id,target_id\n";
  for (const TripletRow& r : rows_) {
    out << r.triplet << ',' << r.instrument << ',' << r.verb << ','
        << r.target << '\n';
  }
  return out.str();
}

}  // namespace ivt
