#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "gridsec/error.hpp"
#include "gridsec/grid.hpp"

namespace gridsec {

namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::size_t parse_id(std::string_view token, std::size_t line_no, const char* what) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || value == 0)
    throw ParseError(line_no, std::string("expected a positive integer ") + what + ", got '" +
                                  std::string(token) + "'");
  return value;
}

void expect_arity(const std::vector<std::string_view>& tok, std::size_t n, std::size_t line_no) {
  if (tok.size() != n)
    throw ParseError(line_no, "'" + std::string(tok[0]) + "' expects " + std::to_string(n - 1) + " arguments");
}

}  // namespace

Case parse_case_text(std::string_view text, std::string name) {
  Case c;
  c.name = std::move(name);
  bool have_header = false;
  bool have_ref = false;
  bool any_meter = false;
  std::vector<std::size_t> protect_ids;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view raw = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto tok = tokenize(raw);
    if (tok.empty()) continue;

    if (tok[0] == "buses") {
      if (have_header) throw ParseError(line_no, "duplicate 'buses' header");
      if (tok.size() != 2 && tok.size() != 4) throw ParseError(line_no, "expected 'buses <N> [ref <id>]'");
      c.network.bus_count = parse_id(tok[1], line_no, "bus count");
      if (tok.size() == 4) {
        if (tok[2] != "ref") throw ParseError(line_no, "expected 'ref' after the bus count");
        c.network.reference_bus = parse_id(tok[3], line_no, "reference bus") - 1;
        have_ref = true;
      }
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(line_no, "the 'buses' header must come first");

    if (tok[0] == "line") {
      expect_arity(tok, 4, line_no);
      Line l;
      l.from = parse_id(tok[1], line_no, "bus id") - 1;
      l.to = parse_id(tok[2], line_no, "bus id") - 1;
      try {
        l.reactance = parse_rational(tok[3]);
      } catch (const InvalidArgument& e) {
        throw ParseError(line_no, e.what());
      }
      c.network.lines.push_back(std::move(l));
    } else if (tok[0] == "meter") {
      expect_arity(tok, 3, line_no);
      any_meter = true;
      if (tok[1] == "flow")
        c.meters.flow_meters.push_back(parse_id(tok[2], line_no, "line index") - 1);
      else if (tok[1] == "injection")
        c.meters.injection_meters.push_back(parse_id(tok[2], line_no, "bus id") - 1);
      else
        throw ParseError(line_no, "meter kind must be 'flow' or 'injection'");
    } else if (tok[0] == "protect") {
      expect_arity(tok, 2, line_no);
      protect_ids.push_back(parse_id(tok[1], line_no, "meter index") - 1);
    } else {
      throw ParseError(line_no, "unknown directive '" + std::string(tok[0]) + "'");
    }
  }
  if (!have_header) throw ParseError(line_no, "missing 'buses' header");
  if (!have_ref) c.network.reference_bus = 0;

  validate(c.network);
  if (!any_meter) c.meters = default_metering(c.network);
  c.meters.protected_meters = std::move(protect_ids);
  validate(c.network, c.meters);
  return c;
}

Case parse_case(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open case file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_case_text(buf.str(), path.stem().string());
}

std::string format_case(const Case& c) {
  std::ostringstream os;
  os << "# " << c.name << '\n';
  os << "buses " << c.network.bus_count << " ref " << c.network.reference_bus + 1 << '\n';
  for (const auto& l : c.network.lines)
    os << "line " << l.from + 1 << ' ' << l.to + 1 << ' ' << to_string(l.reactance) << '\n';
  for (auto l : c.meters.flow_meters) os << "meter flow " << l + 1 << '\n';
  for (auto b : c.meters.injection_meters) os << "meter injection " << b + 1 << '\n';
  for (auto p : c.meters.protected_meters) os << "protect " << p + 1 << '\n';
  return os.str();
}

}  // namespace gridsec
