#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include "kicked_top/floquet.hpp"

namespace kicked_top {

/// On-disk cache of Floquet eigensystems.
///
/// File layout, all fields little-endian, offsets in bytes:
///
///   0   char[8]   magic "KTEIGSYS"
///   8   uint32    format version (kEigenCacheVersion)
///   12  uint32    method (0 = full Schur, 1 = parity sectors)
///   16  int64     j
///   24  float64   kappa
///   32  float64   alpha
///   40  uint64    parameter key (eigen_cache_key)
///   48  uint64    dimension N = 2j + 1
///   56  int32     number of degenerate clusters
///   60  uint32    reserved, zero
///   64  float64[N]        quasienergies, ascending
///   ..  int8[N]           parities (+1 even, -1 odd)
///   ..  zero padding to the next multiple of 8
///   ..  float64[2 N N]    eigenvectors, column-major, (re, im) pairs
///
/// Quasienergies follow F|v> = exp(+i nu)|v>.
inline constexpr std::uint32_t kEigenCacheVersion = 1;

/// FNV-1a hash over (j, kappa bits, alpha bits, method).
std::uint64_t eigen_cache_key(const KickedTopParams& params, DiagonalizationMethod method);

void save_eigensystem(const std::filesystem::path& path, const FloquetEigensystem& eig);

/// Reads a cache file. Returns nullopt when the file is missing, has another
/// version, or was written for different parameters.
std::optional<FloquetEigensystem> load_eigensystem(const std::filesystem::path& path,
                                                   const KickedTopParams& params, DiagonalizationMethod method);

/// Looks up `params` under `directory`, solving and storing on a miss.
FloquetEigensystem cached_solve(const std::filesystem::path& directory, const KickedTopParams& params,
                                DiagonalizationMethod method);

}  // namespace kicked_top
