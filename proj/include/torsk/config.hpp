#pragma once

#include <string>
#include <vector>

#include "torsk/datasets.hpp"
#include "torsk/detection.hpp"
#include "torsk/input_maps.hpp"
#include "torsk/reservoir.hpp"
#include "torsk/training.hpp"
#include "torsk/trend.hpp"
#include "torsk/types.hpp"

namespace torsk {

struct DatasetConfig {
    std::string kind;  // mackey | lissajous | chaotic-blob | file
    long long steps = 0;
    std::uint64_t seed = 0;
    MackeyGlassParams mg;
    BlobParams blob;
    std::vector<AnomalySpec> anomalies;
};

struct ImedConfig {
    bool enabled = false;
    double sigma = 1.0;
};

struct TrendConfig {
    int degree = 2;
    Rational cycle_length{0, 1};  // required for cycle-based prediction
    Rational resample{0, 0};      // a_C; {0,0} = automatic
    int dct_block = 4;
};

/// One declarative file drives every command. Sections: [dataset],
/// [input_maps], [reservoir], [solver], [imed], [trend], [window],
/// [normality], [output]. Unknown sections or keys are rejected.
struct RunConfig {
    DatasetConfig dataset;
    std::vector<InputMapSpec> input_maps;
    ReservoirConfig reservoir;
    SolverSpec solver;
    ImedConfig imed;
    TrendConfig trend;
    WindowPlan window;
    NormalityConfig normality;
    std::string output_dir = "out";
};

RunConfig parse_run_config(const std::string& path);

/// Parses "p/q" or a plain integer.
Rational parse_rational(const std::string& text);

}  // namespace torsk
