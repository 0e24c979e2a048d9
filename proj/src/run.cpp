#include "mtplan/run.hpp"

namespace mtplan {

long path_cost(const std::vector<RunStep>& steps)
{
    long cost = 0;
    for (std::size_t k = 1; k < steps.size(); ++k)
        for (std::size_t i = 0; i < steps[k].cells.size() && i < steps[k - 1].cells.size(); ++i)
            if (steps[k].cells[i] != steps[k - 1].cells[i])
                ++cost;
    return cost;
}

bool state_less(const RunStep& a, const RunStep& b)
{
    return a < b;
}

} // namespace mtplan
