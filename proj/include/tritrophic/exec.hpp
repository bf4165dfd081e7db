#pragma once

namespace tritrophic {

/// Selects between the serial reference path of a kernel and its OpenMP
/// path. Both paths produce bitwise-identical results: the parallel path
/// only distributes independent evaluations, reductions stay serial.
enum class Exec { serial, parallel };

}  // namespace tritrophic
