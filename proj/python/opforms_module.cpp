#include <pybind11/pybind11.h>
PYBIND11_MODULE(_opforms, m) { m.doc() = "exact cochain workbench"; }
