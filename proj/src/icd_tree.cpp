#include "icdsel/icd_tree.hpp"

#include <sstream>

#include "icdsel/errors.hpp"
#include "icdsel/io.hpp"

namespace icdsel {

IcdLevel parse_level(const std::string& s) {
    if (s == "chapter") return IcdLevel::Chapter;
    if (s == "block") return IcdLevel::Block;
    if (s == "category") return IcdLevel::Category;
    if (s == "subcategory") return IcdLevel::Subcategory;
    if (s == "expansion") return IcdLevel::Expansion;
    throw MalformedRow("unknown level '" + s + "'");
}

const char* level_name(IcdLevel level) {
    switch (level) {
        case IcdLevel::Chapter: return "chapter";
        case IcdLevel::Block: return "block";
        case IcdLevel::Category: return "category";
        case IcdLevel::Subcategory: return "subcategory";
        case IcdLevel::Expansion: return "expansion";
    }
    return "?";
}

IcdTree IcdTree::parse_file(const std::string& path) {
    const auto lines = io::read_lines(path);
    if (lines.empty()) throw MalformedRow(path + ": empty tree file");
    if (io::split_csv(lines[0], 4).size() < 4 || io::split_csv(lines[0], 4)[0] != "code")
        throw MalformedRow(path + ": expected header 'code,parent,level,description'");
    std::vector<IcdNode> nodes;
    nodes.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto f = io::split_csv(lines[i], 4);
        if (f.size() < 4 || f[0].empty())
            throw MalformedRow(path + ":" + std::to_string(i + 1) + ": expected 4 fields");
        IcdNode n;
        n.code = f[0];
        if (!f[1].empty()) n.parent = f[1];
        n.level = parse_level(f[2]);
        n.description = f[3];
        nodes.push_back(std::move(n));
    }
    return parse_rows(nodes);
}

IcdTree IcdTree::parse_rows(const std::vector<IcdNode>& nodes) {
    IcdTree t;
    t.nodes_ = nodes;
    t.index_.reserve(nodes.size());
    for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
        const auto [it, inserted] = t.index_.emplace(t.nodes_[i].code, static_cast<int>(i));
        if (!inserted) throw DuplicateCode("'" + t.nodes_[i].code + "' appears twice");
    }
    t.parent_index_.assign(t.nodes_.size(), -1);
    for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
        const IcdNode& n = t.nodes_[i];
        if (n.level == IcdLevel::Chapter) {
            if (n.parent) throw MalformedRow("chapter '" + n.code + "' must not have a parent");
            continue;
        }
        if (!n.parent) throw UnknownParent("non-chapter '" + n.code + "' has no parent");
        const auto it = t.index_.find(*n.parent);
        if (it == t.index_.end())
            throw UnknownParent("'" + n.code + "' references missing parent '" + *n.parent + "'");
        t.parent_index_[i] = it->second;
        if (t.nodes_[static_cast<std::size_t>(it->second)].level >= n.level)
            throw MalformedRow("'" + n.code + "' (" + level_name(n.level) +
                               ") must sit below its parent level");
    }
    // depths via parent walks; the strict level ordering above rules out
    // cycles already, but guard the walk anyway
    t.depth_.assign(t.nodes_.size(), -1);
    for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
        int d = 0;
        int cur = static_cast<int>(i);
        while (t.parent_index_[static_cast<std::size_t>(cur)] >= 0) {
            cur = t.parent_index_[static_cast<std::size_t>(cur)];
            if (++d > static_cast<int>(t.nodes_.size()))
                throw CycleDetected("parent chain starting at '" + t.nodes_[i].code + "'");
        }
        if (t.nodes_[static_cast<std::size_t>(cur)].level != IcdLevel::Chapter)
            throw UnknownParent("'" + t.nodes_[i].code + "' does not reach a chapter");
        t.depth_[i] = d;
    }
    return t;
}

bool IcdTree::contains(const std::string& code) const { return index_.count(code) != 0; }

int IcdTree::index_of(const std::string& code) const {
    const auto it = index_.find(code);
    if (it == index_.end()) throw UnknownCode("'" + code + "' not in tree");
    return it->second;
}

const IcdNode& IcdTree::node(const std::string& code) const {
    return nodes_[static_cast<std::size_t>(index_of(code))];
}

int IcdTree::depth(const std::string& code) const {
    return depth_[static_cast<std::size_t>(index_of(code))];
}

std::vector<std::string> IcdTree::ancestors(const std::string& code) const {
    std::vector<std::string> out;
    int cur = index_of(code);
    while (parent_index_[static_cast<std::size_t>(cur)] >= 0) {
        cur = parent_index_[static_cast<std::size_t>(cur)];
        out.push_back(nodes_[static_cast<std::size_t>(cur)].code);
    }
    return out;
}

double IcdTree::feature_weight(const std::string& code) const {
    return 1.0 / (1.0 + depth(code));
}

std::vector<std::string> IcdTree::leaves() const {
    std::vector<bool> has_child(nodes_.size(), false);
    for (const int p : parent_index_)
        if (p >= 0) has_child[static_cast<std::size_t>(p)] = true;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (!has_child[i]) out.push_back(nodes_[i].code);
    return out;
}

std::string IcdTree::serialize() const {
    std::ostringstream ss;
    ss << "code,parent,level,description\n";
    for (const IcdNode& n : nodes_)
        ss << n.code << ',' << (n.parent ? *n.parent : "") << ',' << level_name(n.level) << ','
           << n.description << '\n';
    return ss.str();
}

}  // namespace icdsel
