#pragma once

/*
 * Text formats.
 *
 * Problem (input) file; `#` starts a comment, blank lines are ignored:
 *
 *     ts <num_states>
 *     <u> <v>              one transition per line
 *     end
 *     label <q> <string>   optional, any number
 *     blocks               optional
 *     <idx>: <q> <q> ...   idx = 0, 1, 2, ... in order
 *     end
 *     rel                  optional, requires blocks; reflexive pairs implied
 *     <i> <j>              blocks[i] x blocks[j] is in the preorder
 *     end
 *
 * Explicit blocks/rel override labels; labels alone give the label-equality
 * partition with the identity relation; neither gives the single block Q x Q.
 *
 * Result file (canonical, written by serialize_result):
 *
 *     blocks <k>
 *     <idx>: <q> ...       blocks sorted by smallest state, states ascending
 *     rel
 *     <i> <j>              non-reflexive pairs, lexicographic order
 *     end
 */

#include <charconv>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "simrel/preorder.hpp"
#include "simrel/transition_system.hpp"
#include "simrel/types.hpp"

namespace simrel {

struct Problem {
    TransitionSystem system;
    PartitionRelationPair initial;
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_words(std::string_view s)
{
    std::vector<std::string_view> words;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const auto start = s.find_first_not_of(" \t\r", pos);
        if (start == std::string_view::npos) {
            break;
        }
        auto stop = s.find_first_of(" \t\r", start);
        if (stop == std::string_view::npos) {
            stop = s.size();
        }
        words.push_back(s.substr(start, stop - start));
        pos = stop;
    }
    return words;
}

/// A non-blank, comment-stripped line with its 1-based number.
struct Line {
    std::size_t number;
    std::string_view text;
};

inline std::vector<Line> significant_lines(std::string_view text)
{
    std::vector<Line> lines;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto stop = text.find('\n', pos);
        if (stop == std::string_view::npos) {
            stop = text.size();
        }
        ++number;
        auto line = text.substr(pos, stop - pos);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (!line.empty()) {
            lines.push_back({number, line});
        }
        if (stop == text.size()) {
            break;
        }
        pos = stop + 1;
    }
    return lines;
}

inline std::size_t parse_index(std::string_view word, std::size_t line, std::string_view what)
{
    std::size_t value = 0;
    const auto* end = word.data() + word.size();
    auto [ptr, ec] = std::from_chars(word.data(), end, value);
    if (word.empty() || ec != std::errc() || ptr != end) {
        throw InputError(line, "expected " + std::string(what) + ", got '" + std::string(word) + "'");
    }
    return value;
}

inline State parse_state(std::string_view word, std::size_t line, std::size_t num_states)
{
    const auto q = parse_index(word, line, "a state id");
    if (q >= num_states) {
        throw InputError(line, "state " + std::string(word) + " out of range (ts has " +
                                   std::to_string(num_states) + " states)");
    }
    return static_cast<State>(q);
}

/// Cursor over significant lines.
class LineReader {
public:
    explicit LineReader(std::string_view text) : lines_(significant_lines(text)) {}

    bool done() const { return next_ == lines_.size(); }
    const Line& peek() const { return lines_[next_]; }
    const Line& take() { return lines_[next_++]; }

    std::size_t last_line_number() const { return lines_.empty() ? 0 : lines_.back().number; }

private:
    std::vector<Line> lines_;
    std::size_t next_ = 0;
};

/// Parses `<idx>: <q> <q> ...` lines until `end` (or until `count` lines
/// when given). Returns the blocks; throws on non-sequential idx.
inline StateBlocks read_block_lines(LineReader& in, std::size_t num_states, std::optional<std::size_t> count,
                                    std::size_t header_line)
{
    StateBlocks blocks;
    std::vector<std::size_t> owner_line(num_states, 0);
    while (true) {
        if (count && blocks.size() == *count) {
            break;
        }
        if (in.done()) {
            throw InputError(header_line, count ? "blocks section ends early" : "blocks section missing 'end'");
        }
        const auto& line = in.take();
        if (!count && line.text == "end") {
            break;
        }
        const auto colon = line.text.find(':');
        if (colon == std::string_view::npos) {
            throw InputError(line.number, "expected '<idx>: <states>' in blocks section");
        }
        const auto idx = parse_index(trim(line.text.substr(0, colon)), line.number, "a block index");
        if (idx != blocks.size()) {
            throw InputError(line.number, "block index " + std::to_string(idx) + " out of order (expected " +
                                              std::to_string(blocks.size()) + ")");
        }
        StateBlock block;
        for (auto word : split_words(line.text.substr(colon + 1))) {
            const State q = parse_state(word, line.number, num_states);
            if (owner_line[q] != 0) {
                throw InputError(line.number, "state " + std::to_string(q) + " already belongs to a block (line " +
                                                  std::to_string(owner_line[q]) + ")");
            }
            owner_line[q] = line.number;
            block.push_back(q);
        }
        if (block.empty()) {
            throw InputError(line.number, "block " + std::to_string(idx) + " is empty");
        }
        blocks.push_back(std::move(block));
    }
    for (std::size_t q = 0; q < num_states; ++q) {
        if (owner_line[q] == 0) {
            throw InputError(header_line, "state " + std::to_string(q) + " belongs to no block");
        }
    }
    return blocks;
}

/// Parses `<i> <j>` lines until `end`, then checks the result is a
/// partial order over blocks once reflexive pairs are added.
inline std::set<BlockPair> read_rel_lines(LineReader& in, std::size_t num_blocks, std::size_t header_line)
{
    std::vector<std::pair<BlockPair, std::size_t>> listed;
    while (true) {
        if (in.done()) {
            throw InputError(header_line, "rel section missing 'end'");
        }
        const auto& line = in.take();
        if (line.text == "end") {
            break;
        }
        const auto words = split_words(line.text);
        if (words.size() != 2) {
            throw InputError(line.number, "expected '<i> <j>' in rel section");
        }
        const auto i = parse_index(words[0], line.number, "a block index");
        const auto j = parse_index(words[1], line.number, "a block index");
        if (i >= num_blocks || j >= num_blocks) {
            throw InputError(line.number, "rel names block " + std::to_string(std::max(i, j)) + " but only " +
                                              std::to_string(num_blocks) + " blocks exist");
        }
        listed.push_back({{i, j}, line.number});
    }

    std::set<BlockPair> rel;
    std::vector<boost::dynamic_bitset<>> rows(num_blocks, boost::dynamic_bitset<>(num_blocks));
    for (std::size_t b = 0; b < num_blocks; ++b) {
        rel.emplace(b, b);
        rows[b].set(b);
    }
    for (const auto& [pair, number] : listed) {
        rel.insert(pair);
        rows[pair.first].set(pair.second);
    }
    for (const auto& [pair, number] : listed) {
        const auto [i, j] = pair;
        if (i != j && rows[j].test(i)) {
            throw InputError(number, "rel is not antisymmetric: blocks " + std::to_string(i) + " and " +
                                         std::to_string(j) + " are related both ways and should be one block");
        }
        if (!rows[j].is_subset_of(rows[i])) {
            const auto k = (rows[j] - rows[i]).find_first();
            throw InputError(number, "rel is not transitive: (" + std::to_string(i) + ", " + std::to_string(j) +
                                         ") and (" + std::to_string(j) + ", " + std::to_string(k) +
                                         ") need (" + std::to_string(i) + ", " + std::to_string(k) + ")");
        }
    }
    return rel;
}

} // namespace detail

/// Reads a problem file. Throws InputError with a line number on any error.
inline Problem parse_problem(std::string_view text)
{
    detail::LineReader in(text);
    if (in.done()) {
        throw InputError(1, "empty input, expected 'ts <num_states>'");
    }

    const auto& header = in.take();
    const auto head = detail::split_words(header.text);
    if (head.size() != 2 || head[0] != "ts") {
        throw InputError(header.number, "expected 'ts <num_states>'");
    }
    const auto n = detail::parse_index(head[1], header.number, "a state count");
    if (n == 0) {
        throw InputError(header.number, "a transition system needs at least one state");
    }

    std::vector<Transition> arcs;
    while (true) {
        if (in.done()) {
            throw InputError(header.number, "ts section missing 'end'");
        }
        const auto& line = in.take();
        if (line.text == "end") {
            break;
        }
        const auto words = detail::split_words(line.text);
        if (words.size() != 2) {
            throw InputError(line.number, "expected '<u> <v>' transition");
        }
        arcs.emplace_back(detail::parse_state(words[0], line.number, n), detail::parse_state(words[1], line.number, n));
    }

    std::map<State, std::string> labels;
    std::optional<StateBlocks> blocks;
    std::optional<std::set<BlockPair>> rel;
    while (!in.done()) {
        const auto& line = in.take();
        const auto words = detail::split_words(line.text);
        if (words[0] == "label") {
            if (words.size() < 3) {
                throw InputError(line.number, "expected 'label <q> <string>'");
            }
            const State q = detail::parse_state(words[1], line.number, n);
            const auto rest = detail::trim(line.text.substr(words[2].data() - line.text.data()));
            if (!labels.emplace(q, std::string(rest)).second) {
                throw InputError(line.number, "state " + std::to_string(q) + " is labelled twice");
            }
        } else if (line.text == "blocks") {
            if (blocks) {
                throw InputError(line.number, "duplicate blocks section");
            }
            blocks = detail::read_block_lines(in, n, std::nullopt, line.number);
        } else if (line.text == "rel") {
            if (!blocks) {
                throw InputError(line.number, "rel section requires a preceding blocks section");
            }
            if (rel) {
                throw InputError(line.number, "duplicate rel section");
            }
            rel = detail::read_rel_lines(in, blocks->size(), line.number);
        } else {
            throw InputError(line.number, "unexpected '" + std::string(line.text) + "'");
        }
    }

    Problem problem{TransitionSystem(n, std::move(arcs)), {}};
    if (blocks) {
        problem.initial.blocks = std::move(*blocks);
        if (rel) {
            problem.initial.rel = std::move(*rel);
        } else {
            for (std::size_t b = 0; b < problem.initial.blocks.size(); ++b) {
                problem.initial.rel.emplace(b, b);
            }
        }
    } else if (!labels.empty()) {
        // unlabelled states share the empty label
        std::map<std::string, std::size_t> block_of_label;
        for (std::size_t q = 0; q < n; ++q) {
            const auto it = labels.find(static_cast<State>(q));
            const std::string label = it == labels.end() ? std::string() : it->second;
            const auto [pos, fresh] = block_of_label.emplace(label, problem.initial.blocks.size());
            if (fresh) {
                problem.initial.blocks.emplace_back();
                problem.initial.rel.emplace(pos->second, pos->second);
            }
            problem.initial.blocks[pos->second].push_back(static_cast<State>(q));
        }
    } else {
        problem.initial = PartitionRelationPair::universal(n);
    }
    return problem;
}

/// Canonical text of a partition-relation pair; see the format note above.
inline std::string serialize_result(const PartitionRelationPair& prp)
{
    const auto c = prp.canonical();
    std::ostringstream out;
    out << "blocks " << c.blocks.size() << '\n';
    for (std::size_t b = 0; b < c.blocks.size(); ++b) {
        out << b << ':';
        for (State q : c.blocks[b]) {
            out << ' ' << q;
        }
        out << '\n';
    }
    out << "rel\n";
    for (const auto& [i, j] : c.rel) {
        if (i != j) {
            out << i << ' ' << j << '\n';
        }
    }
    out << "end\n";
    return out.str();
}

/// Reads a result file produced by serialize_result.
inline PartitionRelationPair parse_result(std::string_view text)
{
    detail::LineReader in(text);
    if (in.done()) {
        throw InputError(1, "empty input, expected 'blocks <count>'");
    }
    const auto& header = in.take();
    const auto head = detail::split_words(header.text);
    if (head.size() != 2 || head[0] != "blocks") {
        throw InputError(header.number, "expected 'blocks <count>'");
    }
    const auto count = detail::parse_index(head[1], header.number, "a block count");

    // State count is implied by the blocks; read them with a generous range
    // first, then check they cover 0..n-1.
    std::size_t n = 0;
    {
        detail::LineReader probe(text);
        probe.take();
        for (std::size_t b = 0; b < count && !probe.done(); ++b) {
            const auto& line = probe.take();
            const auto colon = line.text.find(':');
            if (colon == std::string_view::npos) {
                break;
            }
            n += detail::split_words(line.text.substr(colon + 1)).size();
        }
    }
    PartitionRelationPair prp;
    prp.blocks = detail::read_block_lines(in, n, count, header.number);
    if (in.done() || in.peek().text != "rel") {
        throw InputError(in.done() ? in.last_line_number() : in.peek().number, "expected 'rel'");
    }
    const auto rel_line = in.take().number;
    prp.rel = detail::read_rel_lines(in, prp.blocks.size(), rel_line);
    if (!in.done()) {
        throw InputError(in.peek().number, "trailing content after 'end'");
    }
    return prp;
}

/// Writes a system in the `ts` section format.
inline std::string serialize_system(const TransitionSystem& ts)
{
    std::ostringstream out;
    out << "ts " << ts.num_states() << '\n';
    for (const auto& [u, v] : ts.transitions()) {
        out << u << ' ' << v << '\n';
    }
    out << "end\n";
    return out.str();
}

} // namespace simrel
