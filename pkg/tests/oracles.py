"""Brute-force reference functions, written without the package."""


def digits(m):
    """Binary digits of m, most significant first; 0 has none."""
    out = []
    while m:
        out.append(m & 1)
        m >>= 1
    return out[::-1]


def s1(m):
    return 2 * m


def s2(m):
    return 2 * m + 1


def pred(n):
    return n >> 1


def cond_truth_table(a, b, c):
    return b if a % 2 == 0 else c


def bit_length(m):
    return len(digits(m))


def flips(m, start=0):
    """Iterate a -> 1 - a once per binary digit of m."""
    a = start
    for _ in digits(m):
        a = 1 - a if a <= 1 else 0
    return a


def least_witness(f, x, limit):
    """Least b <= limit with f(x, b) == 0, or None."""
    for b in range(limit + 1):
        if f(x, b) == 0:
            return b
    return None


def least_even(h, limit):
    for b in range(limit + 1):
        if h(b) % 2 == 0:
            return b
    return None


def iterate_count(step, state, limit):
    """Number of steps before ``step`` reports a stop (None); None if over limit."""
    for count in range(limit + 1):
        state = step(state)
        if state is None:
            return count
    return None


# the five-function test family for Kleene minimization, as plain arithmetic
KLEENE_FAMILY = {
    "bitlen-b": lambda x, b: max(bit_length(x) - b, 0),
    "bitlen-half-b": lambda x, b: max(bit_length(x) - b // 2, 0),
    "parity": lambda x, b: x % 2,
    "bitlen-pred-b": lambda x, b: max(bit_length(x) - max(b - 1, 0), 0),
    "bitlen-2b": lambda x, b: max(bit_length(x) - 2 * b, 0),
}
