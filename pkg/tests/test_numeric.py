import random

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ldcl.errors import AlphabetError, DomainError
from ldcl.numeric import (
    DefaultNumber,
    LogFraction,
    add_multiples,
    antilog_default,
    digits_to_int,
    divmod_default,
    int_to_digits,
    log_base_default,
)
from ldcl.oracle import naive_subtract_count

D9, D99, D999 = DefaultNumber(1), DefaultNumber(2), DefaultNumber(3)


def mp_log_digits(r, D, p):
    """Independent oracle: log_D(r) rounded half-up to p digits, via mpmath.

    A result that rounds to 1 saturates at p nines.
    """
    with mpmath.workdps(p + 40):
        x = mpmath.log(r) / mpmath.log(D) * mpmath.mpf(10) ** p
        k = int(mpmath.floor(x + mpmath.mpf("0.5")))
    return str(min(k, 10**p - 1)).rjust(p, "0")


def mp_antilog(digits, D):
    with mpmath.workdps(len(str(D)) + len(digits) + 40):
        L = mpmath.mpf(int(digits)) / mpmath.mpf(10) ** len(digits)
        return int(mpmath.floor(mpmath.power(D, L) + mpmath.mpf("0.5")))


class TestDefaultNumber:
    def test_value(self):
        assert DefaultNumber(3).value == 999
        assert DefaultNumber(299).digits == "9" * 299
        assert DefaultNumber.for_set_length(300).nines == 299

    def test_rejects_zero_nines(self):
        with pytest.raises(DomainError):
            DefaultNumber(0)


class TestDigits:
    def test_long_strings_have_no_cap(self):
        s = "7" * 6000
        assert int_to_digits(digits_to_int(s)) == s

    def test_padding(self):
        assert int_to_digits(42, 5) == "00042"

    def test_rejects_non_digits(self):
        with pytest.raises(AlphabetError):
            digits_to_int("12a")


class TestDivmod:
    @pytest.mark.parametrize("s,d,expected", [
        (5324, D999, (5, 329)),
        (1998, D999, (2, 0)),
        (100, D99, (1, 1)),
    ])
    def test_examples(self, s, d, expected):
        assert divmod_default(s, d) == expected
        assert naive_subtract_count(s, d) == expected

    def test_zero_is_a_domain_error(self):
        with pytest.raises(DomainError):
            divmod_default(0, D999)

    @given(st.integers(1, 10**6), st.integers(1, 4))
    def test_matches_naive(self, s, nines):
        d = DefaultNumber(nines)
        assert divmod_default(s, d) == naive_subtract_count(s, d)

    @pytest.mark.parametrize("d", [D9, D99, D999])
    def test_add_multiples_inverts(self, d):
        for s in range(1, 10_000):
            m, r = divmod_default(s, d)
            assert add_multiples(r, m, d) == s

    @pytest.mark.parametrize("nines", [2, 3, 10, 299])
    def test_multiplier_range_for_full_sets(self, nines):
        d = DefaultNumber(nines)
        lo, hi = 10**nines, 10 ** (nines + 1) - 1
        assert divmod_default(lo, d)[0] == 1
        assert divmod_default(hi, d)[0] == 10

    def test_add_multiples_examples(self):
        assert add_multiples(329, 5, D999) == 5324
        assert add_multiples(0, 1, D999) == 999
        assert add_multiples(1, 0, D999) == 1


class TestLog:
    def test_log_of_one_is_zero(self):
        assert log_base_default(1, D999, 8) == LogFraction("00000000")

    def test_known_value(self):
        # log(329)/log(999) = 0.8391868448...
        assert log_base_default(329, D999, 6).digits == "839187"
        assert mp_log_digits(329, 999, 6) == "839187"

    def test_near_one(self):
        frac = log_base_default(998, D999, 6)
        assert frac.digits[0] == "9"

    def test_rounding_up_to_one_is_clamped(self):
        # log_999(998) = 0.99985..., which rounds to 1.00 at two digits
        assert log_base_default(998, D999, 2).digits == "99"

    @pytest.mark.parametrize("r", [0, 999, 5000])
    def test_domain(self, r):
        with pytest.raises(DomainError):
            log_base_default(r, D999, 6)

    @pytest.mark.parametrize("p", [1, 2, 3, 6, 10])
    def test_matches_mpmath_exhaustively_for_999(self, p):
        for r in range(1, 999):
            assert log_base_default(r, D999, p).digits == mp_log_digits(r, 999, p), r

    def test_matches_mpmath_for_large_default(self):
        rng = random.Random(7)
        d = DefaultNumber(299)
        for _ in range(30):
            r = rng.randrange(1, d.value)
            for p in (8, 40, 305):
                assert log_base_default(r, d, p).digits == mp_log_digits(r, d.value, p)

    @pytest.mark.parametrize("p", [1, 3, 6])
    def test_monotone(self, p):
        digits = [log_base_default(r, D999, p).numerator for r in range(1, 999)]
        assert digits == sorted(digits)


class TestAntilog:
    def test_zero(self):
        assert antilog_default(LogFraction.zero(5), D999) == 1

    def test_recovers_example(self):
        assert antilog_default(log_base_default(329, D999, 10), D999) == 329

    def test_low_precision_matches_independent_power(self):
        losses = 0
        for r in range(1, 99):
            frac = log_base_default(r, D99, 2)
            got = antilog_default(frac, D99)
            assert got == min(max(mp_antilog(frac.digits, 99), 1), 98)
            losses += got != r
        # two stored digits cannot separate 98 residues
        assert losses > 0

    @pytest.mark.parametrize("nines", [1, 2, 3])
    def test_recovery_at_full_precision(self, nines):
        d = DefaultNumber(nines)
        p = nines + 5
        for r in range(1, d.value):
            assert antilog_default(log_base_default(r, d, p), d) == r

    def test_recovery_large_random(self):
        rng = random.Random(3)
        for nines in (19, 49, 99, 299):
            d = DefaultNumber(nines)
            for _ in range(25):
                r = rng.randrange(1, d.value)
                assert antilog_default(log_base_default(r, d, nines + 6), d) == r

    def test_clamped_into_range(self):
        assert antilog_default(LogFraction("9"), D9) <= 8
        assert antilog_default(LogFraction("999999"), D999) == 998


class TestLogFraction:
    def test_basics(self):
        f = LogFraction.from_numerator(42, 5)
        assert f.digits == "00042"
        assert f.precision == 5
        assert str(f) == "0.00042"
        assert LogFraction.zero(3).is_zero()

    def test_rejects_overflow(self):
        with pytest.raises(DomainError):
            LogFraction.from_numerator(1000, 3)

    def test_rejects_non_digits(self):
        with pytest.raises(ValueError):
            LogFraction("12x")
