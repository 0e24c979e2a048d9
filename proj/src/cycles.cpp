#include "mtplan/cycles.hpp"

#include <algorithm>

namespace mtplan {

namespace {

class Walker {
public:
    Walker(const Digraph& g, const std::function<bool(const std::vector<int>&)>& visit, std::size_t cap,
           const PathSearchHooks& hooks)
        : g_(g)
        , visit_(visit)
        , cap_(cap)
        , hooks_(hooks)
        , out_(g.nodes)
        , on_path_(g.nodes, false)
    {
        for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
            out_[g.edges[e].first].push_back(e);
    }

    EnumerationStats run(int source, int target)
    {
        target_ = target;
        on_path_[source] = true;
        walk(source);
        return stats_;
    }

private:
    // Returns false once the walk must stop.
    bool walk(int v)
    {
        std::vector<std::pair<long, int>> next;
        for (int e : out_[v]) {
            const int t = g_.edges[e].second;
            if (t != target_ && on_path_[t])
                continue;
            if (hooks_.admit && !hooks_.admit(path_, e))
                continue;
            next.emplace_back(hooks_.rank ? hooks_.rank(path_, e) : 0, e);
        }
        std::stable_sort(next.begin(), next.end());
        for (const auto& [key, e] : next) {
            const int t = g_.edges[e].second;
            path_.push_back(e);
            bool go_on = true;
            if (t == target_) {
                ++stats_.emitted;
                go_on = visit_(path_);
                if (cap_ && stats_.emitted >= cap_) {
                    stats_.truncated = true;
                    go_on = false;
                }
            } else {
                on_path_[t] = true;
                go_on = walk(t);
                on_path_[t] = false;
            }
            path_.pop_back();
            if (!go_on)
                return false;
        }
        return true;
    }

    const Digraph& g_;
    const std::function<bool(const std::vector<int>&)>& visit_;
    std::size_t cap_;
    const PathSearchHooks& hooks_;
    std::vector<std::vector<int>> out_;
    std::vector<bool> on_path_;
    std::vector<int> path_;
    int target_ = -1;
    EnumerationStats stats_;
};

} // namespace

EnumerationStats enumerate_simple_cycles(const Digraph& g, int root,
                                         const std::function<bool(const std::vector<int>&)>& visit,
                                         std::size_t cap, const PathSearchHooks& hooks)
{
    return Walker(g, visit, cap, hooks).run(root, root);
}

EnumerationStats enumerate_simple_paths(const Digraph& g, int source, int target,
                                        const std::function<bool(const std::vector<int>&)>& visit,
                                        std::size_t cap, const PathSearchHooks& hooks)
{
    return Walker(g, visit, cap, hooks).run(source, target);
}

} // namespace mtplan
