#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "p3pc/dag.hpp"
#include "p3pc/error.hpp"

namespace p3pc {

// Line-oriented edge-list format:
//
//   # comment
//   node <NAME>            optional declaration, fixes index order
//   <NAME> -> <NAME>       one directed edge
//
// NAME matches [A-Za-z0-9_.-]+. Blank lines are ignored. Undeclared names
// get indices in order of first appearance.

namespace detail {

inline bool valid_name(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
                        c == '.' || c == '-';
        if (!ok) return false;
    }
    return true;
}

inline std::string_view trim(std::string_view s) {
    constexpr std::string_view ws = " \t\r\n";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    return s.substr(first, s.find_last_not_of(ws) - first + 1);
}

}  // namespace detail

inline Dag parse_edge_list(std::string_view text) {
    std::vector<std::string> names;
    std::unordered_map<std::string, std::size_t> index;
    std::vector<Edge> edges;
    std::unordered_map<std::uint64_t, std::size_t> edge_line;

    auto intern = [&](std::string_view name) {
        auto [it, inserted] = index.emplace(std::string(name), names.size());
        if (inserted) names.emplace_back(name);
        return it->second;
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        const auto raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        const auto line = detail::trim(raw);
        if (line.empty() || line.front() == '#') continue;

        if (const auto arrow = line.find("->"); arrow != std::string_view::npos) {
            const auto tail = detail::trim(line.substr(0, arrow));
            const auto head = detail::trim(line.substr(arrow + 2));
            if (!detail::valid_name(tail) || !detail::valid_name(head)) {
                throw ParseError(line_no, "malformed edge '" + std::string(line) + "'");
            }
            if (tail == head) throw FormatError("line " + std::to_string(line_no) + ": self-loop on '" + std::string(tail) + "'");
            const auto t = intern(tail);
            const auto h = intern(head);
            const auto key = (static_cast<std::uint64_t>(t) << 32) | h;
            if (auto [it, inserted] = edge_line.emplace(key, line_no); !inserted) {
                throw FormatError("line " + std::to_string(line_no) + ": duplicate edge " + std::string(tail) +
                                  " -> " + std::string(head) + " (first on line " + std::to_string(it->second) + ")");
            }
            edges.push_back({NodeId{t}, NodeId{h}});
            continue;
        }

        constexpr std::string_view keyword = "node";
        if (line.starts_with(keyword) && line.size() > keyword.size() &&
            (line[keyword.size()] == ' ' || line[keyword.size()] == '\t')) {
            const auto name = detail::trim(line.substr(keyword.size()));
            if (!detail::valid_name(name)) throw ParseError(line_no, "malformed node name '" + std::string(name) + "'");
            if (index.contains(std::string(name))) {
                throw FormatError("line " + std::to_string(line_no) + ": node '" + std::string(name) +
                                  "' declared after first use or twice");
            }
            intern(name);
            continue;
        }
        throw ParseError(line_no, "unrecognised line '" + std::string(line) + "'");
    }
    const std::size_t n = names.size();
    return Dag(n, std::move(edges), std::move(names));
}

/// Canonical text: every node declared in index order, then edges sorted by
/// (tail, head) index. Parsing it back reproduces the indices exactly.
inline std::string serialize(const Dag& dag) {
    std::string out;
    for (const auto& name : dag.names()) {
        out += "node ";
        out += name;
        out += '\n';
    }
    for (const Edge& e : dag.edges()) {
        out += dag.name(e.tail);
        out += " -> ";
        out += dag.name(e.head);
        out += '\n';
    }
    return out;
}

inline Dag load_dag_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open DAG file '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_edge_list(buf.str());
}

/// Real-world networks shipped under data/, with their published sizes and
/// the reported P3PC/PC test proportion.
struct BundledNetwork {
    std::string_view id;
    std::string_view display_name;
    std::size_t nodes;
    std::size_t edges;
    double reported_proportion;
};

inline constexpr std::array<BundledNetwork, 10> bundled_networks{{
    {"child", "Child", 20, 25, 0.361},
    {"alarm", "Alarm", 37, 46, 0.143},
    {"mildew", "Mildew", 35, 46, 0.055},
    {"ecoli", "Ecoli", 46, 70, 0.285},
    {"insurance", "Insurance", 27, 52, 0.073},
    {"water", "Water", 32, 66, 0.021},
    {"barley", "Barley", 48, 84, 0.006},
    {"magic_niab", "Magic Niab", 44, 66, 0.008},
    {"mehra", "Mehra", 24, 71, 0.137},
    {"magic_irri", "Magic Irri", 64, 102, 0.005},
}};

inline std::optional<BundledNetwork> find_bundled(std::string_view id) {
    for (const auto& net : bundled_networks)
        if (net.id == id) return net;
    return std::nullopt;
}

inline std::filesystem::path bundled_path(const std::filesystem::path& data_dir, const BundledNetwork& net) {
    return data_dir / (std::string(net.id) + ".txt");
}

}  // namespace p3pc
