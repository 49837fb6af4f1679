//! The complex interval domain: closed rectangles in the plane ordered
//! by reverse inclusion.
//!
//! A rectangle is spanned by two endpoints with rank(lo) ≤ rank(hi);
//! the point set only depends on the componentwise extremes, so the
//! corners are canonicalised on construction. Degenerate rectangles
//! (single points) are the maximal elements.

use crate::linops::C64;
use crate::order::rank;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DomainError {
    #[error("endpoints are not ordered: rank({0}) > rank({1})")]
    InvalidEndpoints(C64, C64),
    #[error("empty set has no supremum")]
    EmptySet,
    #[error("set is not directed under reverse inclusion")]
    NotDirected,
    #[error("basis pair is not componentwise strictly ordered")]
    InvalidBasic,
}

/// Closed rectangle `[lo, hi]` with canonical corners: `lo` is the
/// componentwise minimum, `hi` the componentwise maximum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    lo: C64,
    hi: C64,
}

impl Rect {
    /// Span a rectangle by two endpoints; requires rank(a) ≤ rank(b).
    pub fn new(a: C64, b: C64) -> Result<Self, DomainError> {
        if rank(a) > rank(b) {
            return Err(DomainError::InvalidEndpoints(a, b));
        }
        Ok(Rect {
            lo: C64::new(a.re.min(b.re), a.im.min(b.im)),
            hi: C64::new(a.re.max(b.re), a.im.max(b.im)),
        })
    }

    /// Degenerate rectangle containing a single point.
    pub fn point(z: C64) -> Self {
        Rect { lo: z, hi: z }
    }

    pub fn lo(&self) -> C64 {
        self.lo
    }

    pub fn hi(&self) -> C64 {
        self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Length of the largest side.
    pub fn diameter(&self) -> f64 {
        (self.hi.re - self.lo.re).max(self.hi.im - self.lo.im)
    }

    pub fn contains(&self, z: C64) -> bool {
        self.lo.re <= z.re && z.re <= self.hi.re && self.lo.im <= z.im && z.im <= self.hi.im
    }

    pub fn subset_of(&self, other: &Rect) -> bool {
        other.lo.re <= self.lo.re
            && self.hi.re <= other.hi.re
            && other.lo.im <= self.lo.im
            && self.hi.im <= other.hi.im
    }

    /// Rectangle midway between `self` and `other` by corner averaging.
    pub fn midpoint(&self, other: &Rect) -> Rect {
        Rect {
            lo: (self.lo + other.lo) / 2.0,
            hi: (self.hi + other.hi) / 2.0,
        }
    }
}

/// Information order `x ⊑ y`: y refines x, i.e. y ⊆ x as point sets.
pub fn rect_below(x: &Rect, y: &Rect) -> bool {
    y.subset_of(x)
}

/// Approximation (way-below) relation: y lies in the interior of x,
/// componentwise strictly in both real and imaginary parts.
pub fn way_below(x: &Rect, y: &Rect) -> bool {
    x.lo.re < y.lo.re && x.lo.im < y.lo.im && y.hi.re < x.hi.re && y.hi.im < x.hi.im
}

/// Supremum of a finite directed set: the intersection
/// `[max of lows, min of highs]`. Directedness is checked pairwise
/// against members of the set.
pub fn directed_sup(set: &[Rect]) -> Result<Rect, DomainError> {
    if set.is_empty() {
        return Err(DomainError::EmptySet);
    }
    for x in set {
        for y in set {
            if !set.iter().any(|z| rect_below(x, z) && rect_below(y, z)) {
                return Err(DomainError::NotDirected);
            }
        }
    }
    let mut lo = set[0].lo;
    let mut hi = set[0].hi;
    for r in &set[1..] {
        lo = C64::new(lo.re.max(r.lo.re), lo.im.max(r.lo.im));
        hi = C64::new(hi.re.min(r.hi.re), hi.im.min(r.hi.im));
    }
    if lo.re > hi.re || lo.im > hi.im {
        return Err(DomainError::NotDirected);
    }
    Ok(Rect { lo, hi })
}

/// Membership of `sigma` in the Scott-basis open set spanned by the
/// open rectangle `(alpha, beta)`; requires alpha < beta componentwise.
pub fn scott_basic_contains(alpha: C64, beta: C64, sigma: &Rect) -> Result<bool, DomainError> {
    if !(alpha.re < beta.re && alpha.im < beta.im) {
        return Err(DomainError::InvalidBasic);
    }
    Ok(alpha.re < sigma.lo.re
        && sigma.hi.re < beta.re
        && alpha.im < sigma.lo.im
        && sigma.hi.im < beta.im)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn r(a: C64, b: C64) -> Rect {
        Rect::new(a, b).unwrap()
    }

    #[test]
    fn general_rectangle_canonicalises_corners() {
        // Endpoints of equal rank spanning a genuine square.
        let x = r(c(1.0, 0.0), c(0.0, 1.0));
        assert_eq!(x.lo(), c(0.0, 0.0));
        assert_eq!(x.hi(), c(1.0, 1.0));
        assert!(x.contains(c(0.5, 0.5)));
        assert!(!x.contains(c(1.5, 0.5)));
    }

    #[test]
    fn rejects_unordered_endpoints() {
        assert!(Rect::new(c(2.0, 2.0), c(0.0, 0.0)).is_err());
    }

    #[test]
    fn below_examples() {
        let big = r(c(0.0, 0.0), c(2.0, 2.0));
        let seg = r(c(1.0, 0.0), c(1.0, 1.0));
        assert!(rect_below(&big, &seg));
        assert!(rect_below(&big, &big));
        let a = r(c(0.0, 0.0), c(1.0, 1.0));
        let b = r(c(2.0, 2.0), c(3.0, 3.0));
        assert!(!rect_below(&a, &b));
        assert!(!rect_below(&b, &a));
    }

    #[test]
    fn way_below_examples() {
        let x = r(c(-1.0, -1.0), c(3.0, 3.0));
        let y = r(c(0.0, 0.0), c(1.0, 1.0));
        assert!(way_below(&x, &y));
        assert!(!way_below(&y, &y));
        // Shared corner defeats strictness.
        let z = r(c(0.0, 0.0), c(2.0, 2.0));
        assert!(!way_below(&z, &y));
    }

    #[test]
    fn way_below_implies_strictly_below() {
        let x = r(c(-1.0, -2.0), c(4.0, 5.0));
        let y = r(c(0.0, 0.0), c(1.0, 1.0));
        assert!(way_below(&x, &y));
        assert!(rect_below(&x, &y) && x != y);
    }

    #[test]
    fn directed_sup_of_nested_chain() {
        // Shrinking chain 1/k·([-1,-1], [1,1]); the finite supremum is
        // the smallest member, and it squeezes onto the point 0.
        let chain: Vec<Rect> = (1..=6)
            .map(|k| {
                let s = 1.0 / k as f64;
                r(c(-s, -s), c(s, s))
            })
            .collect();
        let sup = directed_sup(&chain).unwrap();
        assert_eq!(sup, chain[5]);
        assert!(sup.contains(c(0.0, 0.0)));

        let singleton = directed_sup(&[chain[0]]).unwrap();
        assert_eq!(singleton, chain[0]);
    }

    #[test]
    fn nested_chain_converges_to_point() {
        let chain: Vec<Rect> = (1..=1000)
            .map(|k| {
                let s = 1.0 / k as f64;
                r(c(-s, -s), c(s, s))
            })
            .collect();
        let sup = directed_sup(&chain).unwrap();
        assert!(sup.contains(c(0.0, 0.0)));
        assert!(sup.diameter() <= 2.0 / 1000.0 + 1e-12);
    }

    #[test]
    fn directed_sup_matches_brute_force_intersection() {
        let chain = [
            r(c(-4.0, -4.0), c(4.0, 4.0)),
            r(c(-3.0, -2.0), c(3.5, 4.0)),
            r(c(-2.0, -2.0), c(3.0, 3.0)),
            r(c(-1.0, -0.5), c(2.0, 3.0)),
        ];
        let sup = directed_sup(&chain).unwrap();
        // Corner scan oracle.
        let lo_re = chain.iter().map(|x| x.lo().re).fold(f64::MIN, f64::max);
        let lo_im = chain.iter().map(|x| x.lo().im).fold(f64::MIN, f64::max);
        let hi_re = chain.iter().map(|x| x.hi().re).fold(f64::MAX, f64::min);
        let hi_im = chain.iter().map(|x| x.hi().im).fold(f64::MAX, f64::min);
        assert_eq!(sup.lo(), c(lo_re, lo_im));
        assert_eq!(sup.hi(), c(hi_re, hi_im));
        // Least upper bound: every member sits below it, and any other
        // upper bound refines it.
        for member in &chain {
            assert!(rect_below(member, &sup));
        }
        let tighter = Rect::point(sup.lo());
        assert!(chain.iter().all(|m| rect_below(m, &tighter)));
        assert!(rect_below(&sup, &tighter));
    }

    #[test]
    fn sup_rejects_non_directed() {
        let a = r(c(0.0, 0.0), c(1.0, 1.0));
        let b = r(c(2.0, 2.0), c(3.0, 3.0));
        assert!(matches!(
            directed_sup(&[a, b]),
            Err(DomainError::NotDirected)
        ));
    }

    #[test]
    fn scott_basic_examples() {
        let sigma = r(c(1.0, 1.0), c(2.0, 2.0));
        assert!(scott_basic_contains(c(0.0, 0.0), c(3.0, 3.0), &sigma).unwrap());
        // Touching the boundary is excluded by openness.
        let touching = r(c(0.0, 1.0), c(2.0, 2.0));
        assert!(!scott_basic_contains(c(0.0, 0.0), c(3.0, 3.0), &touching).unwrap());
        assert!(scott_basic_contains(c(3.0, 0.0), c(0.0, 3.0), &sigma).is_err());
    }

    fn arb_rect() -> impl Strategy<Value = Rect> {
        ((-5.0..5.0f64, -5.0..5.0f64), (0.0..3.0f64, 0.0..3.0f64))
            .prop_map(|((re, im), (w, h))| r(c(re, im), c(re + w, im + h)))
    }

    proptest! {
        #[test]
        fn below_is_partial_order(x in arb_rect(), y in arb_rect(), z in arb_rect()) {
            prop_assert!(rect_below(&x, &x));
            if rect_below(&x, &y) && rect_below(&y, &x) {
                prop_assert_eq!(x, y);
            }
            if rect_below(&x, &y) && rect_below(&y, &z) {
                prop_assert!(rect_below(&x, &z));
            }
        }

        #[test]
        fn way_below_interpolates(x in arb_rect(), y in arb_rect()) {
            if way_below(&x, &y) {
                prop_assert!(rect_below(&x, &y));
                let m = x.midpoint(&y);
                prop_assert!(way_below(&x, &m) && way_below(&m, &y));
            }
        }

        #[test]
        fn scott_membership_matches_corner_oracle(sigma in arb_rect()) {
            let (alpha, beta) = (c(0.0, 0.0), c(3.0, 3.0));
            let got = scott_basic_contains(alpha, beta, &sigma).unwrap();
            let want = [sigma.lo(), sigma.hi(), c(sigma.lo().re, sigma.hi().im), c(sigma.hi().re, sigma.lo().im)]
                .iter()
                .all(|z| alpha.re < z.re && z.re < beta.re && alpha.im < z.im && z.im < beta.im);
            prop_assert_eq!(got, want);
        }
    }
}
