from typing import Iterable, Iterator, List


def compensated_cumsum(values: Iterable[float]) -> Iterator[float]:
    """
    Cumulative sum with Neumaier compensation.

    Yields the running sum after each element, in input order. The running
    error term is folded into every yielded value, so prefix sums of thousands
    of terms keep their last digits.

    Examples
    --------
    >>> list(compensated_cumsum([1.0, 1e100, 1.0, -1e100]))
    [1.0, 1e+100, 1e+100, 2.0]
    """
    s = 0.0
    c = 0.0
    for e in values:
        e = float(e)
        t = s + e
        if abs(s) >= abs(e):
            c += (s - t) + e
        else:
            c += (e - t) + s
        s = t
        yield s + c


def prefix_sums(values: Iterable[float]) -> List[float]:
    """Compensated prefix sums as a list, same length as values."""
    return list(compensated_cumsum(values))


def compensated_sum(values: Iterable[float]) -> float:
    total = 0.0
    for total in compensated_cumsum(values):
        pass
    return total
