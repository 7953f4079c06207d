#pragma once

// The `.crn` text format. See docs/crn_grammar.md.

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "crncert/network.hpp"

namespace crncert {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what);

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  /// Message without the position prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

struct NetworkDocument {
  std::string source;
  Network network;
  /// 1-based source line of each directed reaction.
  std::vector<std::size_t> reaction_line;
  std::vector<std::string> warnings;
};

NetworkDocument parse_network(std::string_view text);

/// Reads and parses a file. I/O failures raise std::runtime_error.
NetworkDocument load_network(const std::filesystem::path& path);

/// Canonical text: one reaction per line in id order, linked reverse pairs
/// merged into `<->` at the lower id, terms in species-id order.
std::string serialize_network(const Network& net);

}  // namespace crncert
