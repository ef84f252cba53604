#include "loccode/codes_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace loccode {

namespace {

int parse_count(std::string_view text, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value < 0)
    throw std::invalid_argument(std::string("pchk: bad ") + what);
  return value;
}

}  // namespace

std::string pchk_to_string(const BitMatrix& h) {
  std::string out = "PCHK n=" + std::to_string(h.cols()) + " rows=" + std::to_string(h.rows()) + "\n";
  for (int r = 1; r <= h.rows(); ++r) {
    out += h.row(r).to_string();
    out += '\n';
  }
  return out;
}

void write_pchk(std::ostream& out, const BitMatrix& h) { out << pchk_to_string(h); }

BitMatrix read_pchk(std::istream& in) {
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (content.empty() || content.back() != '\n')
    throw std::invalid_argument("pchk: missing trailing newline");
  std::vector<std::string_view> lines;
  std::string_view rest = content;
  while (!rest.empty()) {
    std::size_t nl = rest.find('\n');
    lines.push_back(rest.substr(0, nl));
    rest = rest.substr(nl + 1);
  }
  if (lines.empty()) throw std::invalid_argument("pchk: empty file");
  std::string_view header = lines[0];
  constexpr std::string_view kMagic = "PCHK n=";
  if (header.substr(0, kMagic.size()) != kMagic)
    throw std::invalid_argument("pchk: bad header");
  std::string_view tail = header.substr(kMagic.size());
  std::size_t space = tail.find(' ');
  if (space == std::string_view::npos) throw std::invalid_argument("pchk: bad header");
  int n = parse_count(tail.substr(0, space), "n");
  std::string_view rows_part = tail.substr(space + 1);
  constexpr std::string_view kRows = "rows=";
  if (rows_part.substr(0, kRows.size()) != kRows)
    throw std::invalid_argument("pchk: bad header");
  int rows = parse_count(rows_part.substr(kRows.size()), "row count");
  if (n < 1) throw std::invalid_argument("pchk: n must be >= 1");
  if (static_cast<int>(lines.size()) != rows + 1)
    throw std::invalid_argument("pchk: row count does not match header");
  BitMatrix h(0, n);
  for (int r = 0; r < rows; ++r) {
    std::string_view line = lines[static_cast<std::size_t>(r + 1)];
    if (static_cast<int>(line.size()) != n)
      throw std::invalid_argument("pchk: row " + std::to_string(r + 1) + " has wrong length");
    h.append_row(BitWord::from_string(line));
  }
  return h;
}

LinearCode load_code(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open code file: " + path);
  return LinearCode::from_parity_check(read_pchk(in));
}

void save_code(const std::string& path, const LinearCode& code) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write code file: " + path);
  write_pchk(out, code.parity_check());
}

LinearCode resolve_code_ref(const std::string& ref) {
  auto parse_tail_int = [&](std::string_view tail) {
    return parse_count(tail, "shorthand parameter");
  };
  if (ref.rfind("parity", 0) == 0 && ref.size() > 6)
    return parity_code(parse_tail_int(std::string_view(ref).substr(6)));
  if (ref.rfind("hamming", 0) == 0 && ref.size() > 7)
    return hamming_code(parse_tail_int(std::string_view(ref).substr(7)));
  if (ref.rfind("ldpc:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(ref.substr(5));
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 4) throw std::invalid_argument("ldpc ref needs n:rows:row_weight:seed");
    return random_ldpc(parse_tail_int(parts[0]), parse_tail_int(parts[1]),
                       parse_tail_int(parts[2]),
                       static_cast<std::uint64_t>(std::stoull(parts[3])));
  }
  if (ref.rfind("tensor:", 0) == 0) {
    // First factor must be colon-free; the second may itself be a tensor ref.
    std::string rest = ref.substr(7);
    std::size_t split = rest.find(':');
    if (split == std::string::npos || split == 0 || split + 1 == rest.size())
      throw std::invalid_argument("tensor ref needs two factors: tensor:<a>:<b>");
    LinearCode a = resolve_code_ref(rest.substr(0, split));
    LinearCode b = resolve_code_ref(rest.substr(split + 1));
    return tensor_product(a, b);
  }
  return load_code(ref);
}

}  // namespace loccode
