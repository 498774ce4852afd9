#include <array>
#include <charconv>
#include <cstring>
#include <map>
#include <string>
#include <string_view>

#include "insight/errors.hpp"
#include "insight/scene_graph.hpp"

// GraphML 1.0 serialization. The writer is deterministic (fixed key
// order, shortest round-trip number formatting); the reader is a strict
// parser for the same document shape, so import -> export reproduces
// writer output byte for byte.

namespace insight {

namespace {

enum class AttrType { String, Double, Long };

struct AttrSpec {
  const char* name;
  AttrType type;
};

// Declaration order is the serialization order.
constexpr std::array<AttrSpec, 23> kNodeAttrs = {{
    {"kind", AttrType::String},
    {"class", AttrType::String},
    {"iso_name", AttrType::String},
    {"category", AttrType::String},
    {"priority", AttrType::String},
    {"confidence", AttrType::Double},
    {"px", AttrType::Double},
    {"py", AttrType::Double},
    {"pz", AttrType::Double},
    {"cx", AttrType::Double},
    {"cy", AttrType::Double},
    {"cz", AttrType::Double},
    {"dx", AttrType::Double},
    {"dy", AttrType::Double},
    {"dz", AttrType::Double},
    {"yaw", AttrType::Double},
    {"area_id", AttrType::String},
    {"floor_id", AttrType::Long},
    {"n_observations", AttrType::Long},
    {"point_count", AttrType::Long},
    {"source", AttrType::String},
    {"n_children", AttrType::Long},
    {"class_histogram", AttrType::String},
}};

const char* attr_type_name(AttrType t) {
  switch (t) {
    case AttrType::String: return "string";
    case AttrType::Double: return "double";
    case AttrType::Long: return "long";
  }
  return "?";
}

std::string escape_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string escape_attr(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

bool node_has_attr(const SceneNode& node, std::size_t attr_index) {
  const std::string_view name = kNodeAttrs[attr_index].name;
  const bool leaf = node.kind == NodeKind::Surface || node.kind == NodeKind::Instance;
  const bool aggregate = node.kind == NodeKind::Building || node.kind == NodeKind::Floor;
  if (name == "kind" || name == "area_id") return true;
  if (name == "floor_id") return node.kind != NodeKind::Building;
  if (name == "n_children" || name == "class_histogram") return aggregate;
  return leaf;
}

std::string node_attr_value(const SceneNode& node, std::size_t attr_index) {
  const std::string_view name = kNodeAttrs[attr_index].name;
  if (name == "kind") return to_string(node.kind);
  if (name == "class") return node.class_name;
  if (name == "iso_name") return node.iso_name;
  if (name == "category") return node.category;
  if (name == "priority") return node.priority;
  if (name == "confidence") return format_double(node.confidence);
  if (name == "px") return format_double(node.centroid.x());
  if (name == "py") return format_double(node.centroid.y());
  if (name == "pz") return format_double(node.centroid.z());
  if (name == "cx") return format_double(node.box.center.x());
  if (name == "cy") return format_double(node.box.center.y());
  if (name == "cz") return format_double(node.box.center.z());
  if (name == "dx") return format_double(node.box.extents.x());
  if (name == "dy") return format_double(node.box.extents.y());
  if (name == "dz") return format_double(node.box.extents.z());
  if (name == "yaw") return format_double(node.box.yaw);
  if (name == "area_id") return node.area_id;
  if (name == "floor_id") return std::to_string(node.floor_id);
  if (name == "n_observations") return std::to_string(node.n_observations);
  if (name == "point_count") return std::to_string(node.point_count);
  if (name == "source") return node.source;
  if (name == "n_children") return std::to_string(node.n_children);
  if (name == "class_histogram") return node.class_histogram;
  throw ValidationError("unknown node attribute");
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ParseError(ParseErrorKind::BadSchema,
                     "bad double value: " + std::string(text));
  }
  return v;
}

long parse_long(std::string_view text) {
  long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw ParseError(ParseErrorKind::BadSchema, "bad long value: " + std::string(text));
  }
  return v;
}

void set_node_attr(SceneNode& node, std::string_view name, std::string_view value) {
  if (name == "kind") node.kind = node_kind_from_string(value);
  else if (name == "class") node.class_name = std::string(value);
  else if (name == "iso_name") node.iso_name = std::string(value);
  else if (name == "category") node.category = std::string(value);
  else if (name == "priority") node.priority = std::string(value);
  else if (name == "confidence") node.confidence = parse_double(value);
  else if (name == "px") node.centroid.x() = parse_double(value);
  else if (name == "py") node.centroid.y() = parse_double(value);
  else if (name == "pz") node.centroid.z() = parse_double(value);
  else if (name == "cx") node.box.center.x() = parse_double(value);
  else if (name == "cy") node.box.center.y() = parse_double(value);
  else if (name == "cz") node.box.center.z() = parse_double(value);
  else if (name == "dx") node.box.extents.x() = parse_double(value);
  else if (name == "dy") node.box.extents.y() = parse_double(value);
  else if (name == "dz") node.box.extents.z() = parse_double(value);
  else if (name == "yaw") node.box.yaw = parse_double(value);
  else if (name == "area_id") node.area_id = std::string(value);
  else if (name == "floor_id") node.floor_id = static_cast<int>(parse_long(value));
  else if (name == "n_observations") node.n_observations = parse_long(value);
  else if (name == "point_count") node.point_count = parse_long(value);
  else if (name == "source") node.source = std::string(value);
  else if (name == "n_children") node.n_children = parse_long(value);
  else if (name == "class_histogram") node.class_histogram = std::string(value);
  else throw ParseError(ParseErrorKind::BadSchema, "unknown data key: " + std::string(name));
}

// ---------------------------------------------------------------------
// Minimal strict XML reader for the subset the writer emits.

class XmlCursor {
 public:
  explicit XmlCursor(std::string_view text) : text_(text) {}

  void skip_prolog() {
    skip_space();
    if (peek_starts("<?")) {
      const std::size_t end = text_.find("?>", pos_);
      if (end == std::string_view::npos) fail("unterminated XML declaration");
      pos_ = end + 2;
    }
    skip_space();
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else if (peek_starts("<!--")) {
        const std::size_t end = text_.find("-->", pos_);
        if (end == std::string_view::npos) fail("unterminated comment");
        pos_ = end + 3;
      } else {
        break;
      }
    }
  }

  bool at_open_tag(std::string_view name) {
    skip_space();
    if (!peek_starts("<")) return false;
    std::size_t p = pos_ + 1;
    if (p + name.size() > text_.size()) return false;
    if (text_.substr(p, name.size()) != name) return false;
    const char after = p + name.size() < text_.size() ? text_[p + name.size()] : '\0';
    return after == ' ' || after == '>' || after == '/' || after == '\t' ||
           after == '\n';
  }

  // Consumes an open tag and its attributes. Returns true when the
  // element is self-closing.
  bool open(std::string_view name, std::map<std::string, std::string>& attrs) {
    skip_space();
    expect("<");
    expect(name);
    attrs.clear();
    while (true) {
      skip_space();
      if (consume("/>")) return true;
      if (consume(">")) return false;
      const std::string attr_name = read_name();
      skip_space();
      expect("=");
      skip_space();
      expect("\"");
      const std::size_t end = text_.find('"', pos_);
      if (end == std::string_view::npos) fail("unterminated attribute value");
      attrs[attr_name] = unescape(text_.substr(pos_, end - pos_));
      pos_ = end + 1;
    }
  }

  void close(std::string_view name) {
    skip_space();
    expect("</");
    expect(name);
    skip_space();
    expect(">");
  }

  // Raw text content up to the next '<'.
  std::string text_content() {
    const std::size_t end = text_.find('<', pos_);
    if (end == std::string_view::npos) fail("unterminated text content");
    const std::string out = unescape(text_.substr(pos_, end - pos_));
    pos_ = end;
    return out;
  }

  void expect_eof() {
    skip_space();
    if (pos_ != text_.size()) fail("trailing content after document end");
  }

 private:
  bool peek_starts(std::string_view s) const {
    return text_.substr(pos_, s.size()) == s;
  }

  bool consume(std::string_view s) {
    if (!peek_starts(s)) return false;
    pos_ += s.size();
    return true;
  }

  void expect(std::string_view s) {
    if (!consume(s)) {
      fail("expected '" + std::string(s) + "' at offset " + std::to_string(pos_));
    }
  }

  std::string read_name() {
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' ||
          c == ':' || c == '-') {
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ == start) fail("expected a name at offset " + std::to_string(pos_));
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string unescape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
      if (s[i] != '&') {
        out += s[i++];
        continue;
      }
      const std::size_t semi = s.find(';', i);
      if (semi == std::string_view::npos) fail("bad entity reference");
      const std::string_view ent = s.substr(i + 1, semi - i - 1);
      if (ent == "amp") out += '&';
      else if (ent == "lt") out += '<';
      else if (ent == "gt") out += '>';
      else if (ent == "quot") out += '"';
      else if (ent == "apos") out += '\'';
      else fail("unsupported entity &" + std::string(ent) + ";");
      i = semi + 1;
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& why) {
    throw ParseError(ParseErrorKind::BadSyntax, "GraphML: " + why);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string export_graphml(const SceneGraph& graph) {
  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";

  std::size_t gi = 0;
  for (const auto& [name, _] : graph.graph_attributes) {
    out += "  <key id=\"g" + std::to_string(gi++) + "\" for=\"graph\" attr.name=\"" +
           escape_attr(name) + "\" attr.type=\"string\"/>\n";
  }
  for (std::size_t i = 0; i < kNodeAttrs.size(); ++i) {
    out += "  <key id=\"n" + std::to_string(i) + "\" for=\"node\" attr.name=\"";
    out += kNodeAttrs[i].name;
    out += "\" attr.type=\"";
    out += attr_type_name(kNodeAttrs[i].type);
    out += "\"/>\n";
  }

  out += "  <graph id=\"" + escape_attr(graph.graph_id) + "\" edgedefault=\"directed\">\n";
  gi = 0;
  for (const auto& [name, value] : graph.graph_attributes) {
    out += "    <data key=\"g" + std::to_string(gi++) + "\">" + escape_text(value) +
           "</data>\n";
  }
  for (const SceneNode& node : graph.nodes) {
    out += "    <node id=\"" + escape_attr(node.node_id) + "\">\n";
    for (std::size_t i = 0; i < kNodeAttrs.size(); ++i) {
      if (!node_has_attr(node, i)) continue;
      out += "      <data key=\"n" + std::to_string(i) + "\">" +
             escape_text(node_attr_value(node, i)) + "</data>\n";
    }
    out += "    </node>\n";
  }
  std::size_t ei = 0;
  for (const auto& [parent, child] : graph.edges) {
    out += "    <edge id=\"e" + std::to_string(ei++) + "\" source=\"" +
           escape_attr(graph.nodes[parent].node_id) + "\" target=\"" +
           escape_attr(graph.nodes[child].node_id) + "\"/>\n";
  }
  out += "  </graph>\n";
  out += "</graphml>\n";
  return out;
}

SceneGraph import_graphml(const std::string& bytes) {
  XmlCursor cur(bytes);
  cur.skip_prolog();

  std::map<std::string, std::string> attrs;
  if (cur.open("graphml", attrs)) {
    throw ParseError(ParseErrorKind::BadSchema, "graphml element cannot be empty");
  }

  // key id -> (for, attr.name)
  std::map<std::string, std::pair<std::string, std::string>> keys;
  while (cur.at_open_tag("key")) {
    if (!cur.open("key", attrs)) {
      throw ParseError(ParseErrorKind::BadSchema, "key element must be self-closing");
    }
    keys[attrs.at("id")] = {attrs.at("for"), attrs.at("attr.name")};
  }

  SceneGraph graph;
  if (cur.open("graph", attrs)) {
    throw ParseError(ParseErrorKind::BadSchema, "graph element cannot be empty");
  }
  graph.graph_id = attrs.at("id");

  std::map<std::string, uint32_t> node_index;
  while (true) {
    if (cur.at_open_tag("data")) {
      if (cur.open("data", attrs)) {
        throw ParseError(ParseErrorKind::BadSchema, "graph data must carry text");
      }
      const auto it = keys.find(attrs.at("key"));
      if (it == keys.end() || it->second.first != "graph") {
        throw ParseError(ParseErrorKind::BadSchema, "undeclared graph data key");
      }
      graph.graph_attributes[it->second.second] = cur.text_content();
      cur.close("data");
    } else if (cur.at_open_tag("node")) {
      const bool self_closed = cur.open("node", attrs);
      SceneNode node;
      node.node_id = attrs.at("id");
      if (!self_closed) {
        while (cur.at_open_tag("data")) {
          if (cur.open("data", attrs)) {
            throw ParseError(ParseErrorKind::BadSchema, "node data must carry text");
          }
          const auto it = keys.find(attrs.at("key"));
          if (it == keys.end() || it->second.first != "node") {
            throw ParseError(ParseErrorKind::BadSchema, "undeclared node data key");
          }
          const std::string value = cur.text_content();
          cur.close("data");
          set_node_attr(node, it->second.second, value);
        }
        cur.close("node");
      }
      node_index[node.node_id] = static_cast<uint32_t>(graph.nodes.size());
      graph.nodes.push_back(std::move(node));
    } else if (cur.at_open_tag("edge")) {
      if (!cur.open("edge", attrs)) {
        throw ParseError(ParseErrorKind::BadSchema, "edge element must be self-closing");
      }
      const auto src = node_index.find(attrs.at("source"));
      const auto dst = node_index.find(attrs.at("target"));
      if (src == node_index.end() || dst == node_index.end()) {
        throw ParseError(ParseErrorKind::BadSchema, "edge references unknown node");
      }
      graph.edges.emplace_back(src->second, dst->second);
    } else {
      break;
    }
  }
  cur.close("graph");
  cur.close("graphml");
  cur.expect_eof();
  return graph;
}

}  // namespace insight
