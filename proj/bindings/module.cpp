#include <pybind11/pybind11.h>

namespace py = pybind11;

PYBIND11_MODULE(_jetlift, m) {
    m.doc() = "Exact symbolic engine for local differential operators on jet bundles";
}
