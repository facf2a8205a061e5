//! Exact rational arithmetic for sparsity and degree thresholds.
//!
//! Sparsity values and thresholds like alpha, eta, gamma are `Rat`
//! (`Ratio<i128>`). Irrational thresholds are never materialized:
//! `x < alpha^(1/4)` is decided as `x^4 < alpha` by integer
//! cross-multiplication, and `d >= n / (sqrt(s)+1)^2` is decided by
//! isolating the `sqrt(s)` term and squaring. With i128 numerators this
//! is exact for every graph this crate targets (n well below 10^4).

use num_rational::Ratio;

pub type Rat = Ratio<i128>;

/// Shorthand constructor; panics on a zero denominator.
pub fn rat(num: i128, den: i128) -> Rat {
    Ratio::new(num, den)
}

/// Parses "p/q" or a bare integer "p".
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let num: i128 = p.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
    let den: i128 = q.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
    if den == 0 {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Ratio::new(num, den))
}

/// `x^4 < alpha`, exactly. Both sides are nonnegative rationals.
pub fn pow4_lt(x: Rat, alpha: Rat) -> bool {
    debug_assert!(*x.numer() >= 0 && *alpha.numer() >= 0);
    let (a, b) = (*x.numer(), *x.denom());
    let (p, q) = (*alpha.numer(), *alpha.denom());
    // a^4 * q < p * b^4
    pow4(a) * q < p * pow4(b)
}

fn pow4(v: i128) -> i128 {
    let sq = v.checked_mul(v).expect("pow4 overflow");
    sq.checked_mul(sq).expect("pow4 overflow")
}

/// `d >= n / (sqrt(s)+1)^2`, exactly, for integers `d >= 0`, `n >= 0`, `s >= 1`.
///
/// (sqrt(s)+1)^2 = s + 1 + 2 sqrt(s), so the inequality rearranges to
/// 2 d sqrt(s) >= n - d (s+1); if the right side is nonpositive it holds,
/// otherwise both sides are nonnegative and squaring is equivalence.
pub fn deg_meets_star_bound(d: u64, n: u64, s: u64) -> bool {
    let (d, n, s) = (d as i128, n as i128, s as i128);
    let rhs = n - d * (s + 1);
    if rhs <= 0 {
        return true;
    }
    4 * d * d * s >= rhs * rhs
}

/// Smallest integer degree `d` with `d >= n / (sqrt(s)+1)^2`.
pub fn star_bound_ceil(n: u64, s: u64) -> u64 {
    (0..=n).find(|&d| deg_meets_star_bound(d, n, s)).unwrap_or(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rat("1/16").unwrap(), rat(1, 16));
        assert_eq!(parse_rat("3").unwrap(), rat(3, 1));
        assert_eq!(parse_rat(" 2 / 5 ").unwrap(), rat(2, 5));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn fourth_power_comparison() {
        // (1/2)^4 = 1/16
        assert!(!pow4_lt(rat(1, 2), rat(1, 16)));
        assert!(pow4_lt(rat(1, 2), rat(2, 16)));
        assert!(pow4_lt(rat(1, 25), rat(1, 100)));
    }

    #[test]
    fn star_degree_bound_matches_float() {
        // Exact comparison must agree with f64 on comfortably-sized inputs.
        for s in 1..6u64 {
            for n in 1..60u64 {
                let bound = n as f64 / ((s as f64).sqrt() + 1.0).powi(2);
                for d in 0..=n {
                    let float_ok = d as f64 >= bound - 1e-9;
                    // Only check away from the boundary; the exact form is
                    // the ground truth at ties.
                    if ((d as f64) - bound).abs() > 1e-6 {
                        assert_eq!(
                            deg_meets_star_bound(d, n, s),
                            float_ok,
                            "d={d} n={n} s={s}"
                        );
                    }
                }
            }
        }
        // s=1: bound is n/4 exactly.
        assert!(deg_meets_star_bound(3, 12, 1));
        assert!(!deg_meets_star_bound(2, 12, 1));
        assert_eq!(star_bound_ceil(12, 1), 3);
        assert_eq!(star_bound_ceil(10, 1), 3); // 10/4 = 2.5
    }
}
