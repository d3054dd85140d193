import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from logitgof import (
    ConfigError,
    DataError,
    Dataset,
    GroupingScheme,
    ModelSpec,
    Ordering,
    OrderingPolicy,
    default_grouping,
    ensure_valid,
    validate,
)


class TestDataset:
    def test_construction_coerces_and_freezes(self):
        d = Dataset([1, 0, 1], [[0.5, 1.0], [1.5, 2.0], [2.5, 3.0]], ("a", "b"))
        assert d.y.dtype == np.int64
        assert d.x.dtype == np.float64
        assert d.n == 3 and d.m == 2
        assert not d.y.flags.writeable
        assert not d.x.flags.writeable

    def test_names_synthesized_when_missing(self):
        d = Dataset([0, 1], [[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
        assert d.names == ("x1", "x2", "x3")

    def test_column_lookup(self):
        d = Dataset([0], [[1.0, 2.0]], ("left", "right"))
        assert d.column("right") == 1
        with pytest.raises(ConfigError, match="unknown variable"):
            d.column("middle")

    def test_equality_covers_values_and_names(self):
        a = Dataset([0, 1], [[1.0], [2.0]], ("v",))
        b = Dataset([0, 1], [[1.0], [2.0]], ("v",))
        c = Dataset([0, 1], [[1.0], [2.0]], ("w",))
        e = Dataset([0, 1], [[1.0], [2.5]], ("v",))
        assert a == b
        assert a != c
        assert a != e

    def test_input_arrays_are_copied(self):
        x = np.array([[1.0], [2.0]])
        d = Dataset([0, 1], x)
        x[0, 0] = 99.0
        assert d.x[0, 0] == 1.0


class TestValidate:
    def test_valid_dataset_passes(self, finney_dataset):
        assert validate(finney_dataset) is None
        assert ensure_valid(finney_dataset) is finney_dataset

    def test_non_binary_dependent_names_first_bad_row(self):
        d = Dataset([0, 2, 3], [[1.0], [2.0], [3.0]])
        assert validate(d) == "non-binary dependent value at row 2"

    def test_non_finite_covariate_names_row_and_column(self):
        d = Dataset([0, 1], [[1.0, 2.0], [np.inf, 4.0]], ("a", "b"))
        msg = validate(d)
        assert "row 2" in msg and "'a'" in msg

    def test_shape_mismatch(self):
        d = Dataset([0, 1, 1], [[1.0], [2.0]])
        assert "does not match" in validate(d)

    def test_duplicate_names(self):
        d = Dataset([0], [[1.0, 2.0]], ("a", "a"))
        assert "duplicate variable name" in validate(d)

    def test_ensure_valid_raises_data_error(self):
        with pytest.raises(DataError, match="non-binary"):
            ensure_valid(Dataset([5], [[1.0]]))


class TestModelSpec:
    def test_l_counts_included_columns(self):
        assert ModelSpec().l == 0
        assert ModelSpec((0, 2)).l == 2

    def test_check_against_rejects_out_of_range(self):
        d = Dataset([0], [[1.0, 2.0]])
        ModelSpec((0, 1)).check_against(d)
        with pytest.raises(ConfigError, match="out of range"):
            ModelSpec((2,)).check_against(d)

    def test_check_against_rejects_duplicates(self):
        d = Dataset([0], [[1.0, 2.0]])
        with pytest.raises(ConfigError, match="duplicate"):
            ModelSpec((1, 1)).check_against(d)


class TestOrdering:
    def test_accepts_permutation(self):
        o = Ordering([2, 0, 1], OrderingPolicy.GIVEN)
        assert o.sigma.tolist() == [2, 0, 1]

    def test_rejects_non_permutation(self):
        with pytest.raises(DataError, match="not a permutation"):
            Ordering([0, 0, 2], OrderingPolicy.GIVEN)

    def test_policy_values_are_the_label_tokens(self):
        assert {p.value for p in OrderingPolicy} == {
            "mu-full", "mu-tested", "residual", "given",
        }


class TestGrouping:
    def test_sizes_must_be_positive(self):
        with pytest.raises(ConfigError, match="positive"):
            GroupingScheme((3, 0))
        with pytest.raises(ConfigError, match="positive"):
            GroupingScheme(())

    def test_counts_and_starts(self):
        s = GroupingScheme((4, 4, 2))
        assert s.g == 3 and s.n == 10
        assert s.starts().tolist() == [0, 4, 8]

    def test_default_grouping_hand_cases(self):
        assert default_grouping(39, 3).sizes == (13, 13, 13)
        assert default_grouping(39, 5).sizes == (8, 8, 8, 8, 7)
        assert default_grouping(10, 3).sizes == (4, 4, 2)
        assert default_grouping(5, 5).sizes == (1, 1, 1, 1, 1)

    def test_default_grouping_rejects_bad_counts(self):
        with pytest.raises(ConfigError):
            default_grouping(10, 0)
        with pytest.raises(ConfigError):
            default_grouping(10, 11)
        # ceil(10/6) = 2 leaves nothing for the sixth group
        with pytest.raises(ConfigError):
            default_grouping(10, 6)

    @given(st.integers(2, 400), st.integers(1, 12))
    def test_default_grouping_partitions_n(self, n, g):
        if g > n:
            return
        try:
            s = default_grouping(n, g)
        except ConfigError:
            return
        assert s.n == n
        assert s.g == g
        head = -(-n // g)
        assert all(size == head for size in s.sizes[:-1])
        assert 1 <= s.sizes[-1] <= head
