#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace icdsel {

enum class IcdLevel { Chapter = 0, Block, Category, Subcategory, Expansion };

IcdLevel parse_level(const std::string& s);
const char* level_name(IcdLevel level);

struct IcdNode {
    std::string code;
    std::optional<std::string> parent;  // absent for chapters
    IcdLevel level = IcdLevel::Chapter;
    std::string description;
};

// The code hierarchy. Immutable after construction; safe for concurrent
// reads. Depth counts parent edges up to the chapter (chapters are depth 0),
// which gives chapters feature weight 1/(1+0) = 1.
class IcdTree {
public:
    static IcdTree parse_file(const std::string& path);
    static IcdTree parse_rows(const std::vector<IcdNode>& nodes);

    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<IcdNode>& nodes() const { return nodes_; }

    bool contains(const std::string& code) const;
    const IcdNode& node(const std::string& code) const;

    int depth(const std::string& code) const;

    // Nearest parent first, ending at the chapter. length == depth(code).
    std::vector<std::string> ancestors(const std::string& code) const;

    // 1 / (1 + depth)
    double feature_weight(const std::string& code) const;

    // Codes with no children.
    std::vector<std::string> leaves() const;

    std::string serialize() const;

private:
    int index_of(const std::string& code) const;  // throws UnknownCode

    std::vector<IcdNode> nodes_;
    std::vector<int> parent_index_;  // -1 for chapters
    std::vector<int> depth_;
    std::unordered_map<std::string, int> index_;
};

}  // namespace icdsel
