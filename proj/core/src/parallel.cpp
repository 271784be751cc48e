#include "hw/parallel.hpp"

namespace hw {

namespace {
std::atomic<int> g_workers{1};
}

int worker_count() { return g_workers.load(); }

void set_worker_count(int n) { g_workers.store(std::max(1, n)); }

}  // namespace hw
