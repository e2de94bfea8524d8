#include <pybind11/pybind11.h>
PYBIND11_MODULE(_hermc, m) { m.doc() = "placeholder"; }
