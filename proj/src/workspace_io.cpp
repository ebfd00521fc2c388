#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mrcert/errors.hpp"
#include "mrcert/workspace.hpp"

namespace mrcert {
namespace {

using nlohmann::json;

void put_number(std::string& out, double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                 std::chars_format::general, 17);
  out.append(buf.data(), res.ptr);
}

void put_point(std::string& out, const Point& p) {
  out += '[';
  for (std::size_t k = 0; k < p.dim(); ++k) {
    if (k > 0) out += ", ";
    put_number(out, p[k]);
  }
  out += ']';
}

void put_rect(std::string& out, const Rect& r) {
  out += "{\"lo\": ";
  put_point(out, r.lo());
  out += ", \"hi\": ";
  put_point(out, r.hi());
  out += '}';
}

template <class T, class F>
void put_list(std::string& out, const char* key, const std::vector<T>& items, F&& put, bool last) {
  out += "  \"";
  out += key;
  out += "\": [";
  for (std::size_t i = 0; i < items.size(); ++i) {
    out += i == 0 ? "\n    " : ",\n    ";
    put(out, items[i]);
  }
  out += items.empty() ? "]" : "\n  ]";
  out += last ? "\n" : ",\n";
}

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw ParseError("workspace: field '" + path + "': " + what);
}

const json& member(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) field_error(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) field_error(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

Point parse_point(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != Workspace::kDim) field_error(path, "expected [x, y]");
  std::vector<double> c;
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) field_error(path + "[" + std::to_string(k) + "]", "expected a number");
    c.push_back(j[k].get<double>());
  }
  try {
    return Point(std::move(c));
  } catch (const ContractViolation& e) {
    field_error(path, e.what());
  }
}

Rect parse_rect(const json& j, const std::string& path) {
  Point lo = parse_point(member(j, "lo", path), path + ".lo");
  Point hi = parse_point(member(j, "hi", path), path + ".hi");
  try {
    return Rect(std::move(lo), std::move(hi));
  } catch (const ContractViolation& e) {
    field_error(path, e.what());
  }
}

template <class T, class F>
std::vector<T> parse_list(const json& root, const char* key, F&& parse) {
  const json& arr = member(root, key, "");
  if (!arr.is_array()) field_error(key, "expected an array");
  std::vector<T> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    out.push_back(parse(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::string write_workspace(const Workspace& w) {
  std::string out = "{\n  \"bounds\": ";
  put_rect(out, w.bounds());
  out += ",\n";
  put_list(out, "obstacles", w.obstacles(), put_rect, false);
  put_list(out, "starts", w.starts(), put_point, false);
  put_list(out, "goals", w.goals(), put_point, true);
  out += "}\n";
  return out;
}

Workspace read_workspace(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("workspace: line " + std::to_string(line) + ", column " +
                     std::to_string(col) + ": malformed JSON");
  }
  if (!root.is_object()) throw ParseError("workspace: line 1: top level must be a JSON object");

  Rect bounds = parse_rect(member(root, "bounds", ""), "bounds");
  auto obstacles = parse_list<Rect>(root, "obstacles", parse_rect);
  auto starts = parse_list<Point>(root, "starts", parse_point);
  auto goals = parse_list<Point>(root, "goals", parse_point);

  const auto problems = Workspace::invariant_violations(bounds, obstacles, starts, goals);
  if (!problems.empty()) throw ParseError("workspace: " + problems.front());
  return Workspace(std::move(bounds), std::move(obstacles), std::move(starts), std::move(goals));
}

Workspace load_workspace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open workspace file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_workspace(buf.str());
}

void save_workspace(const Workspace& w, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write workspace file '" + path + "'");
  out << write_workspace(w);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace mrcert
