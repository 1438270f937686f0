#pragma once

#include <cstdint>

// FNV-1a digests of scenarios/reference.json (seed 42) outputs: events.log
// text and the single-row report.csv.
namespace golden {
inline constexpr std::uint64_t kReferenceEventsFnv = 0xc80bf2fdee3bbb96ULL;
inline constexpr std::uint64_t kReferenceReportFnv = 0x41a9015be5ea79c6ULL;
}  // namespace golden
