#ifndef BMSTRUN_PARALLEL_HPP_
#define BMSTRUN_PARALLEL_HPP_

#include <cstddef>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace bmstrun
{

/// Worker count: BMSTRUN_WORKERS if set, otherwise the OpenMP default.
inline int default_workers()
{
	if (const char *env = std::getenv("BMSTRUN_WORKERS"))
	{
		const int n = std::atoi(env);
		if (n > 0)
			return n;
	}
#ifdef _OPENMP
	return omp_get_max_threads();
#else
	return 1;
#endif
}

/// Runs body(i, worker) for i in [0, n), worker in [0, workers). Results must not
/// depend on the schedule: every index writes only its own output slot and callers
/// reduce in index order.
template <class Body>
void parallel_for_worker(std::size_t n, int workers, Body &&body)
{
#ifdef _OPENMP
	if (workers > 1 && n > 1)
	{
		const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
		for (long long i = 0; i < count; ++i)
			body(static_cast<std::size_t>(i), omp_get_thread_num());
		return;
	}
#endif
	for (std::size_t i = 0; i < n; ++i)
		body(i, 0);
}

template <class Body>
void parallel_for(std::size_t n, int workers, Body &&body)
{
	parallel_for_worker(n, workers, [&](std::size_t i, int) { body(i); });
}

}

#endif
