#pragma once

// Internal: typed access to an INI document with errors that name the key.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <set>
#include <string>
#include <string_view>
#include <system_error>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace dynamask::detail {

using Ptree = boost::property_tree::ptree;

template <class Err>
Ptree read_ini(std::istream& in, std::string_view what) {
  Ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Err(std::string(what) + ": line " + std::to_string(e.line()) + ": " +
              e.message());
  }
  return tree;
}

inline std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

template <class Err>
class Section {
 public:
  Section(std::string name, const Ptree& tree) : name_(std::move(name)), tree_(tree) {}

  // Rejects keys outside `known`.
  void expect_keys(std::initializer_list<std::string_view> known) const {
    for (const auto& [key, child] : tree_) {
      if (!child.empty()) throw Err("unexpected nesting under " + qualified(key));
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        throw Err("unknown key '" + qualified(key) + "'");
      }
    }
  }

  bool has(const std::string& key) const { return tree_.find(key) != tree_.not_found(); }

  std::string text(const std::string& key) const {
    return trim(tree_.get_child(key).data());
  }

  template <class T>
  void read(const std::string& key, T& out) const {
    if (!has(key)) return;
    const std::string raw = text(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (raw == "true" || raw == "1" || raw == "yes" || raw == "on") {
        out = true;
      } else if (raw == "false" || raw == "0" || raw == "no" || raw == "off") {
        out = false;
      } else {
        throw bad_value(key, raw);
      }
    } else if constexpr (std::is_same_v<T, std::string>) {
      out = raw;
    } else {
      T value{};
      const auto* end = raw.data() + raw.size();
      const auto res = std::from_chars(raw.data(), end, value);
      if (raw.empty() || res.ec != std::errc{} || res.ptr != end) throw bad_value(key, raw);
      out = value;
    }
  }

  Err bad_value(const std::string& key, const std::string& raw) const {
    return Err("invalid value '" + raw + "' for key '" + qualified(key) + "'");
  }

  std::string qualified(const std::string& key) const { return name_ + "." + key; }

 private:
  std::string name_;
  const Ptree& tree_;
};

}  // namespace dynamask::detail
