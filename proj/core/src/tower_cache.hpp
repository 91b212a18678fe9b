#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <tuple>

#include "kummod/field.hpp"
#include "kummod/kummer.hpp"

namespace kummod {

struct Tower::Cache {
    std::mutex mu;
    std::map<std::tuple<int, int, int>, std::shared_ptr<const KummerGroup>> groups;
    std::optional<RootsOfUnity> roots;
};

}  // namespace kummod
