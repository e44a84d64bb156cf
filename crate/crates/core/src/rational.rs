//! Exact rational arithmetic for scores.
//!
//! Every score in this crate is a [`Rational`]: the average evaluation scheme
//! hands out fractional shares and the Copeland tie parameter is an arbitrary
//! rational in [0, 1], so floating point would break the exact biconditional
//! checks the verifiers rely on. `Ratio<i64>` keeps values in lowest terms
//! with a positive denominator, which is exactly the invariant we need.

pub type Rational = num_rational::Ratio<i64>;

/// `n/d` as a rational. Panics if `d == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

/// An integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Least common multiple of the denominators of `values`, used to clear a
/// batch of rationals to integers before a dynamic program runs on them.
pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> i64 {
    values
        .into_iter()
        .fold(1i64, |acc, v| num_integer::lcm(acc, *v.denom()))
}

/// Multiplies `value` by `scale` and returns the result as an integer.
/// Callers are expected to have chosen `scale` via [`denominator_lcm`].
pub fn clear_to_integer(value: &Rational, scale: i64) -> i64 {
    let scaled = value * int(scale);
    debug_assert!(scaled.is_integer());
    scaled.to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_positive_denominator() {
        let r = rat(-4, -6);
        assert_eq!(*r.numer(), 2);
        assert_eq!(*r.denom(), 3);
        let s = rat(3, -9);
        assert_eq!(*s.numer(), -1);
        assert_eq!(*s.denom(), 3);
    }

    #[test]
    fn clearing_a_batch() {
        let values = [rat(1, 2), rat(2, 3), int(5)];
        let lcm = denominator_lcm(&values);
        assert_eq!(lcm, 6);
        assert_eq!(clear_to_integer(&values[0], lcm), 3);
        assert_eq!(clear_to_integer(&values[1], lcm), 4);
        assert_eq!(clear_to_integer(&values[2], lcm), 30);
    }
}
