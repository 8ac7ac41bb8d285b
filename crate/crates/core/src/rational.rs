//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Renders `n` when integral and `p/q` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rational::new(p, q))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Generalized binomial coefficient `top choose k` for any integer `top`.
pub fn binomial(top: i64, k: u64) -> BigInt {
    let mut num = BigInt::one();
    for i in 0..k as i64 {
        num *= top - i;
    }
    num / factorial(k)
}

/// `c^e` for a nonzero integer `c` and any integer exponent.
pub fn signed_pow(c: i64, e: i64) -> Rational {
    let base = Rational::from_integer(BigInt::from(c));
    let p = num_traits::pow(base, e.unsigned_abs() as usize);
    if e >= 0 {
        p
    } else {
        p.recip()
    }
}

pub fn is_negative(q: &Rational) -> bool {
    q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generalized_binomial_matches_negative_identity() {
        // (-n choose k) = (-1)^k (n+k-1 choose k)
        for n in 1..6i64 {
            for k in 0..6u64 {
                let lhs = binomial(-n, k);
                let mut rhs = binomial(n + k as i64 - 1, k);
                if k % 2 == 1 {
                    rhs = -rhs;
                }
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(2, 5), BigInt::zero());
    }

    #[test]
    fn formatting_round_trips() {
        let q = Rational::new(BigInt::from(-6), BigInt::from(4));
        assert_eq!(format_rational(&q), "-3/2");
        assert_eq!(parse_rational("-3/2"), Some(q));
        assert_eq!(format_rational(&int(7)), "7");
        assert_eq!(parse_rational("x/2"), None);
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn signed_powers() {
        assert_eq!(signed_pow(-2, 3), int(-8));
        assert_eq!(signed_pow(-2, -1), Rational::new(BigInt::from(-1), BigInt::from(2)));
        assert_eq!(signed_pow(3, 0), int(1));
    }
}
