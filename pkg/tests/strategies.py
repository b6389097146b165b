from hypothesis import strategies as st

from gogfold import words as W


def raw_words(rank: int = 2, max_size: int = 12):
    letters = [k for i in range(1, rank + 1) for k in (i, -i)]
    return st.lists(st.sampled_from(letters), max_size=max_size).map(tuple)


def reduced(rank: int = 2, max_size: int = 12):
    return raw_words(rank, max_size).map(W.free_reduce)


def nontrivial(rank: int = 2, max_size: int = 10):
    return reduced(rank, max_size).filter(bool)


def int_matrices(max_rows: int = 4, max_cols: int = 4, bound: int = 9):
    return st.integers(1, max_rows).flatmap(
        lambda m: st.integers(1, max_cols).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(-bound, bound), min_size=n, max_size=n),
                min_size=m, max_size=m)))
