# cython: language_level=3
# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled session kernel.

Statement-for-statement twin of _purecore.py; both must produce
bit-identical output for the same arguments.  See _purecore for the RNG
protocol.  All randomness is 64-bit integer math plus exact IEEE double
operations, so equality across the two backends is exact, not approximate.
"""

from libc.stdint cimport uint64_t, int64_t

cdef double _DOUBLE_UNIT = 2.0 ** -53
DEF _MAX_POP = 64


cdef inline uint64_t _rotl(uint64_t x, int k) nogil:
    return (x << k) | (x >> (64 - k))


cdef inline uint64_t _splitmix64(uint64_t *state) nogil:
    state[0] += <uint64_t>0x9E3779B97F4A7C15
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline uint64_t _next(uint64_t *s) nogil:
    cdef uint64_t x = s[1]
    cdef uint64_t result = _rotl(x * 5, 7) * 9
    cdef uint64_t t = x << 17
    s[2] ^= s[0]
    s[3] ^= s[1]
    s[1] ^= s[2]
    s[0] ^= s[3]
    s[2] ^= t
    s[3] = _rotl(s[3], 45)
    return result


def simulate_session(int n, int rounds, int mode, tuple probs,
                     object seed, int matching=0, bint record=False):
    """Compiled twin of _purecore.simulate_session; same contract."""
    if n < 1:
        raise ValueError("population size must be >= 1")
    if n > _MAX_POP:
        raise ValueError(f"compiled kernel supports populations up to {_MAX_POP}")
    if rounds < 1:
        raise ValueError("rounds must be >= 1")

    cdef uint64_t state = <uint64_t>(<object>seed & ((1 << 64) - 1))
    cdef uint64_t action[4]
    cdef uint64_t match[4]
    cdef int w
    for w in range(4):
        action[w] = _splitmix64(&state)
    for w in range(4):
        match[w] = _splitmix64(&state)

    cdef double px_init, px1, px0, py_init, py1, py0
    if mode == 0:
        px_init = px1 = px0 = probs[0]
        py_init = py1 = py0 = probs[1]
    elif mode == 1:
        px_init = probs[0]
        px1 = probs[1]
        px0 = probs[2]
        py_init = probs[3]
        py1 = probs[4]
        py0 = probs[5]
    else:
        raise ValueError(f"unknown policy mode {mode}")

    cdef int size = n + 1
    cdef list counts = [0] * (size * size)
    cdef int64_t ccounts[(_MAX_POP + 1) * (_MAX_POP + 1)]
    cdef int cell
    for cell in range(size * size):
        ccounts[cell] = 0
    trajectory = [] if record else None

    cdef int seen_y[_MAX_POP]
    cdef int seen_x[_MAX_POP]
    cdef int x_actions[_MAX_POP]
    cdef int y_actions[_MAX_POP]
    cdef int perm[_MAX_POP]
    cdef int m, r, i, j, a, s, k, partner, tmp
    cdef double u, prob
    for m in range(n):
        seen_y[m] = -1
        seen_x[m] = -1

    for r in range(rounds):
        i = 0
        for m in range(n):
            u = (_next(action) >> 11) * _DOUBLE_UNIT
            s = seen_y[m]
            prob = px_init if s < 0 else (px1 if s == 1 else px0)
            a = 1 if u < prob else 0
            x_actions[m] = a
            i += a
        j = 0
        for m in range(n):
            u = (_next(action) >> 11) * _DOUBLE_UNIT
            s = seen_x[m]
            prob = py_init if s < 0 else (py1 if s == 1 else py0)
            a = 1 if u < prob else 0
            y_actions[m] = a
            j += a

        if matching == 0:
            for m in range(n):
                perm[m] = m
            for m in range(n - 1, 0, -1):
                u = (_next(match) >> 11) * _DOUBLE_UNIT
                k = <int>(u * (m + 1))
                tmp = perm[m]
                perm[m] = perm[k]
                perm[k] = tmp
        else:
            for m in range(n):
                perm[m] = (m + r) % n

        for m in range(n):
            partner = perm[m]
            seen_y[m] = y_actions[partner]
            seen_x[partner] = x_actions[m]

        ccounts[i * size + j] += 1
        if record:
            trajectory.append((i, j))

    for cell in range(size * size):
        counts[cell] = ccounts[cell]
    return counts, trajectory
