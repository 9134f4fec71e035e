//! The truncated polynomial ring Λ₁ = F_p[y0, y1] / (y0^p, y1^p).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::fp::{check_same, FpMatrix, Prime};

/// An element of Λ₁, stored densely: `coeffs[a * p + b]` is the coefficient
/// of `y0^a * y1^b`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    p: Prime,
    coeffs: Vec<u32>,
}

impl GroupRingElement {
    pub fn zero(p: Prime) -> Self {
        let n = p.get() as usize;
        GroupRingElement {
            p,
            coeffs: vec![0; n * n],
        }
    }

    pub fn one(p: Prime) -> Self {
        Self::monomial(p, 0, 0)
    }

    /// `y0^a * y1^b`, or zero when either exponent reaches `p`.
    pub fn monomial(p: Prime, a: usize, b: usize) -> Self {
        let mut x = Self::zero(p);
        let n = p.get() as usize;
        if a < n && b < n {
            x.coeffs[a * n + b] = 1;
        }
        x
    }

    pub fn y0(p: Prime) -> Self {
        Self::monomial(p, 1, 0)
    }

    pub fn y1(p: Prime) -> Self {
        Self::monomial(p, 0, 1)
    }

    /// The group element `ε_i = 1 + y_i`.
    pub fn epsilon(p: Prime, i: usize) -> Self {
        assert!(i < 2, "only ε0 and ε1 exist");
        let y = if i == 0 { Self::y0(p) } else { Self::y1(p) };
        &Self::one(p) + &y
    }

    /// Sum of `c * y0^a * y1^b` over the given `(c, a, b)` triples.
    pub fn from_terms(p: Prime, terms: &[(i64, usize, usize)]) -> Self {
        let mut x = Self::zero(p);
        for &(c, a, b) in terms {
            x.add_term(p.reduce(c), a, b);
        }
        x
    }

    fn add_term(&mut self, c: u32, a: usize, b: usize) {
        let n = self.p.get() as usize;
        if a < n && b < n {
            let slot = &mut self.coeffs[a * n + b];
            *slot = self.p.add(*slot, c);
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn coeff(&self, a: usize, b: usize) -> u32 {
        let n = self.p.get() as usize;
        if a < n && b < n {
            self.coeffs[a * n + b]
        } else {
            0
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Nonzero terms as `(coefficient, a, b)` in a-major order.
    pub fn terms(&self) -> impl Iterator<Item = (u32, usize, usize)> + '_ {
        let n = self.p.get() as usize;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(k, &c)| (c, k / n, k % n))
    }

    /// Value at `y0 = y1 = 0`.
    pub fn augmentation(&self) -> u32 {
        self.coeffs[0]
    }

    /// Membership in the ideal ⟨y0 y1⟩, i.e. every term has both exponents
    /// at least one.
    pub fn in_y0y1_ideal(&self) -> bool {
        self.terms().all(|(_, a, b)| a >= 1 && b >= 1)
    }

    pub fn scale(&self, c: u32) -> Self {
        let p = self.p;
        GroupRingElement {
            p,
            coeffs: self.coeffs.iter().map(|&x| p.mul(x, c % p.get())).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        check_same(self.p, other.p)?;
        let p = self.p;
        Ok(GroupRingElement {
            p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&x, &y)| p.add(x, y))
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        check_same(self.p, other.p)?;
        let p = self.p;
        Ok(GroupRingElement {
            p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&x, &y)| p.sub(x, y))
                .collect(),
        })
    }

    /// Truncated convolution.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        check_same(self.p, other.p)?;
        let n = self.p.get() as usize;
        let pu = self.p.get() as u64;
        let mut acc = vec![0u64; n * n];
        for a in 0..n {
            for b in 0..n {
                let x = self.coeffs[a * n + b] as u64;
                if x == 0 {
                    continue;
                }
                for c in 0..n - a {
                    for d in 0..n - b {
                        let y = other.coeffs[c * n + d] as u64;
                        if y != 0 {
                            let slot = &mut acc[(a + c) * n + b + d];
                            *slot = (*slot + x * y) % pu;
                        }
                    }
                }
            }
        }
        Ok(GroupRingElement {
            p: self.p,
            coeffs: acc.into_iter().map(|x| x as u32).collect(),
        })
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// `1 + b + b^2 + ... + b^(p-1)`.
    pub fn norm_element(&self) -> Self {
        let mut sum = Self::zero(self.p);
        let mut power = Self::one(self.p);
        for _ in 0..self.p.get() {
            sum = &sum + &power;
            power = &power * self;
        }
        sum
    }

    /// Matrix of `m ↦ self * m` with respect to `order`.
    pub fn regular_rep_matrix(&self, order: &MonomialOrder) -> Result<FpMatrix> {
        check_same(self.p, order.p)?;
        let n = order.len();
        let mut m = FpMatrix::zeros(self.p, n, n);
        for (j, &(a, b)) in order.exponents().iter().enumerate() {
            let image = self * &Self::monomial(self.p, a, b);
            for (i, &(c, d)) in order.exponents().iter().enumerate() {
                m.set(i, j, image.coeff(c, d) as i64);
            }
        }
        Ok(m)
    }

    /// Parses the `c*y0^a*y1^b + ...` syntax. Signs are allowed between
    /// terms and coefficients are reduced mod p.
    pub fn parse(p: Prime, text: &str) -> Result<Self> {
        parse_element(p, text).map_err(|message| Error::parse(1, message))
    }
}

pub(crate) fn parse_element(p: Prime, text: &str) -> std::result::Result<GroupRingElement, String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err("empty group-ring element".into());
    }
    let mut x = GroupRingElement::zero(p);
    let mut rest = compact.as_str();
    let mut first = true;
    while !rest.is_empty() {
        let mut sign = 1i64;
        match rest.as_bytes()[0] {
            b'+' => rest = &rest[1..],
            b'-' => {
                sign = -1;
                rest = &rest[1..];
            }
            _ if !first => return Err(format!("expected '+' or '-' before {rest:?}")),
            _ => {}
        }
        first = false;
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let term = &rest[..end];
        rest = &rest[end..];
        if term.is_empty() {
            return Err("empty term".into());
        }
        let mut coeff = 1i64;
        let (mut a, mut b) = (0usize, 0usize);
        for (k, factor) in term.split('*').enumerate() {
            if let Some(var) = factor.strip_prefix('y') {
                let (name, exp) = match var.split_once('^') {
                    Some((name, e)) => (
                        name,
                        e.parse::<usize>()
                            .map_err(|_| format!("bad exponent in {factor:?}"))?,
                    ),
                    None => (var, 1),
                };
                match name {
                    "0" => a += exp,
                    "1" => b += exp,
                    _ => return Err(format!("unknown variable y{name}")),
                }
            } else if k == 0 {
                coeff = factor
                    .parse::<i64>()
                    .map_err(|_| format!("bad coefficient {factor:?}"))?;
            } else {
                return Err(format!("unexpected factor {factor:?}"));
            }
        }
        x.add_term(p.reduce(sign * (coeff % p.get() as i64)), a, b);
    }
    Ok(x)
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (c, a, b) in self.terms() {
            if wrote {
                f.write_str(" + ")?;
            }
            wrote = true;
            write!(f, "{c}")?;
            if a > 0 {
                write!(f, "*y0^{a}")?;
            }
            if b > 0 {
                write!(f, "*y1^{b}")?;
            }
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRingElement(p={}, {})", self.p, self)
    }
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, rhs: &GroupRingElement) -> GroupRingElement {
        self.checked_add(rhs).expect("group-ring sum")
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;
    fn sub(self, rhs: &GroupRingElement) -> GroupRingElement {
        self.checked_sub(rhs).expect("group-ring difference")
    }
}

impl Mul for &GroupRingElement {
    type Output = GroupRingElement;
    fn mul(self, rhs: &GroupRingElement) -> GroupRingElement {
        self.checked_mul(rhs).expect("group-ring product")
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;
    fn neg(self) -> GroupRingElement {
        self.scale(self.p.get() - 1)
    }
}

/// An ordered list of the p² exponent pairs, fixing a basis of Λ₁.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    p: Prime,
    exponents: Vec<(usize, usize)>,
    index: Vec<usize>,
}

impl MonomialOrder {
    /// `(a, b)` lexicographic with `a` outer: 1, y1, ..., y1^(p-1), y0, y0 y1, ...
    pub fn standard(p: Prime) -> Self {
        let n = p.get() as usize;
        let exps = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
        Self::custom(p, exps).expect("standard order is a permutation")
    }

    pub fn custom(p: Prime, exponents: Vec<(usize, usize)>) -> Result<Self> {
        let n = p.get() as usize;
        if exponents.len() != n * n {
            return Err(Error::DimensionMismatch {
                context: "monomial order length",
                expected: n * n,
                found: exponents.len(),
            });
        }
        let mut index = vec![usize::MAX; n * n];
        for (i, &(a, b)) in exponents.iter().enumerate() {
            if a >= n || b >= n || index[a * n + b] != usize::MAX {
                return Err(Error::OutOfRange(format!(
                    "monomial order entry ({a}, {b}) is repeated or exceeds p-1"
                )));
            }
            index[a * n + b] = i;
        }
        Ok(MonomialOrder {
            p,
            exponents,
            index,
        })
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn len(&self) -> usize {
        self.exponents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn exponents(&self) -> &[(usize, usize)] {
        &self.exponents
    }

    pub fn index_of(&self, a: usize, b: usize) -> usize {
        self.index[a * self.p.get() as usize + b]
    }

    pub fn coordinates(&self, x: &GroupRingElement) -> Vec<u32> {
        self.exponents.iter().map(|&(a, b)| x.coeff(a, b)).collect()
    }

    pub fn element(&self, coords: &[u32]) -> Result<GroupRingElement> {
        if coords.len() != self.len() {
            return Err(Error::DimensionMismatch {
                context: "group-ring coordinates",
                expected: self.len(),
                found: coords.len(),
            });
        }
        let mut x = GroupRingElement::zero(self.p);
        for (&c, &(a, b)) in coords.iter().zip(&self.exponents) {
            x.add_term(c % self.p.get(), a, b);
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    fn b_sigma() -> GroupRingElement {
        GroupRingElement::from_terms(p3(), &[(1, 0, 0), (1, 1, 1), (2, 2, 1), (2, 1, 2)])
    }

    fn b_tau() -> GroupRingElement {
        GroupRingElement::from_terms(p3(), &[(1, 0, 0), (2, 2, 1), (2, 1, 2), (1, 2, 2)])
    }

    /// Independent product: expand monomial by monomial and drop any term
    /// whose exponent reaches p.
    fn naive_mul(x: &GroupRingElement, y: &GroupRingElement) -> GroupRingElement {
        let p = x.prime();
        let mut terms = Vec::new();
        for (c1, a1, b1) in x.terms() {
            for (c2, a2, b2) in y.terms() {
                let (a, b) = (a1 + a2, b1 + b2);
                if a < p.get() as usize && b < p.get() as usize {
                    terms.push(((c1 * c2) as i64, a, b));
                }
            }
        }
        GroupRingElement::from_terms(p, &terms)
    }

    #[test]
    fn product_examples() {
        let p = p3();
        assert_eq!(
            GroupRingElement::epsilon(p, 0).pow(3),
            GroupRingElement::one(p)
        );
        let y0sq = GroupRingElement::monomial(p, 2, 0);
        assert!((&y0sq * &y0sq).is_zero());
        let y0y1 = GroupRingElement::monomial(p, 1, 1);
        let f = GroupRingElement::from_terms(p, &[(1, 0, 0), (-1, 1, 0), (-1, 0, 1)]);
        let expected = GroupRingElement::from_terms(p, &[(1, 1, 1), (2, 2, 1), (2, 1, 2)]);
        assert_eq!(&y0y1 * &f, expected);
        assert_eq!(&(&y0y1 * &f) + &GroupRingElement::one(p), b_sigma());
    }

    #[test]
    fn norms_at_three() {
        let p = p3();
        assert_eq!(
            b_sigma().norm_element(),
            GroupRingElement::monomial(p, 2, 2)
        );
        assert!(b_tau().norm_element().is_zero());
        assert!(GroupRingElement::one(p).norm_element().is_zero());
    }

    #[test]
    fn regular_representation_examples() {
        let p = p3();
        let order = MonomialOrder::standard(p);
        assert!(GroupRingElement::one(p)
            .regular_rep_matrix(&order)
            .unwrap()
            .is_identity());
        let top = GroupRingElement::monomial(p, 2, 2)
            .regular_rep_matrix(&order)
            .unwrap();
        assert_eq!(top.rank(), 1);
        assert_eq!(
            top.column(0),
            order.coordinates(&GroupRingElement::monomial(p, 2, 2))
        );
        for j in 1..9 {
            assert!(top.column(j).iter().all(|&x| x == 0));
        }
        let bs = b_sigma().regular_rep_matrix(&order).unwrap();
        assert_eq!(bs.kernel().dim(), 0);
    }

    #[test]
    fn standard_order_at_three() {
        let order = MonomialOrder::standard(p3());
        let expected = [
            (0, 0),
            (0, 1),
            (0, 2),
            (1, 0),
            (1, 1),
            (1, 2),
            (2, 0),
            (2, 1),
            (2, 2),
        ];
        assert_eq!(order.exponents(), &expected);
        assert!(MonomialOrder::custom(p3(), vec![(0, 0); 9]).is_err());
    }

    #[test]
    fn augmentation_examples() {
        let p = p3();
        assert_eq!(
            GroupRingElement::from_terms(p, &[(1, 0, 0), (1, 1, 1)]).augmentation(),
            1
        );
        assert_eq!(b_sigma().augmentation(), 1);
        assert_eq!(GroupRingElement::zero(p).augmentation(), 0);
    }

    #[test]
    fn parse_and_display() {
        let p = p3();
        let text = "1 + 1*y0^1*y1^1 + 2*y0^2*y1^1 + 2*y0^1*y1^2";
        let x = GroupRingElement::parse(p, text).unwrap();
        assert_eq!(x, b_sigma());
        assert_eq!(GroupRingElement::parse(p, &x.to_string()).unwrap(), x);
        assert_eq!(x.to_string(), "1 + 1*y0^1*y1^1 + 2*y0^1*y1^2 + 2*y0^2*y1^1");
        let signed = GroupRingElement::parse(p, "1 + y0*y1 - y0^2*y1 - y0*y1^2").unwrap();
        assert_eq!(signed, b_sigma());
        assert_eq!(GroupRingElement::zero(p).to_string(), "0");
        assert_eq!(
            GroupRingElement::parse(p, "0").unwrap(),
            GroupRingElement::zero(p)
        );
        assert!(GroupRingElement::parse(p, "y0^3").unwrap().is_zero());
        for bad in ["", "1 +", "y2", "3*x", "1 y0"] {
            assert!(GroupRingElement::parse(p, bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn mul_matches_naive_exhaustively_at_three() {
        let p = p3();
        for a1 in 0..3 {
            for b1 in 0..3 {
                for a2 in 0..3 {
                    for b2 in 0..3 {
                        let x = GroupRingElement::monomial(p, a1, b1);
                        let y = GroupRingElement::monomial(p, a2, b2);
                        assert_eq!(&x * &y, naive_mul(&x, &y));
                    }
                }
            }
        }
    }

    #[test]
    fn epsilons_have_order_p() {
        for q in [3, 5, 7] {
            let p = Prime::new(q).unwrap();
            for i in 0..2 {
                assert_eq!(
                    GroupRingElement::epsilon(p, i).pow(q),
                    GroupRingElement::one(p)
                );
            }
        }
    }

    fn element(q: u64) -> impl Strategy<Value = GroupRingElement> {
        let n = (q * q) as usize;
        proptest::collection::vec(0i64..q as i64, n).prop_map(move |v| {
            let p = Prime::new(q).unwrap();
            let terms: Vec<_> = v
                .iter()
                .enumerate()
                .map(|(k, &c)| (c, k / q as usize, k % q as usize))
                .collect();
            GroupRingElement::from_terms(p, &terms)
        })
    }

    fn unit_near_one(q: u64) -> impl Strategy<Value = GroupRingElement> {
        element(q).prop_map(move |x| {
            let p = x.prime();
            let ideal = &x * &GroupRingElement::monomial(p, 1, 1);
            &GroupRingElement::one(p) + &ideal
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn ring_axioms(x in element(5), y in element(5), z in element(5)) {
            let one = GroupRingElement::one(x.prime());
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &one, x.clone());
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        }

        #[test]
        fn mul_matches_naive_at_five(x in element(5), y in element(5)) {
            prop_assert_eq!(&x * &y, naive_mul(&x, &y));
        }

        #[test]
        fn norm_telescopes(b in element(5)) {
            let p = b.prime();
            let one = GroupRingElement::one(p);
            prop_assert_eq!(&b.norm_element() * &(&b - &one), &b.pow(5) - &one);
        }

        #[test]
        fn units_near_one_have_order_p(b in unit_near_one(3), c in unit_near_one(5)) {
            for u in [b, c] {
                let p = u.prime();
                let one = GroupRingElement::one(p);
                prop_assert_eq!(u.pow(p.get() as u64), one.clone());
                prop_assert!((&u.norm_element() * &(&u - &one)).is_zero());
            }
        }

        #[test]
        fn regular_rep_is_multiplicative(x in element(3), y in element(3)) {
            let order = MonomialOrder::standard(x.prime());
            let lhs = (&x * &y).regular_rep_matrix(&order).unwrap();
            let rhs = &x.regular_rep_matrix(&order).unwrap() * &y.regular_rep_matrix(&order).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn parse_display_round_trip(x in element(5)) {
            prop_assert_eq!(GroupRingElement::parse(x.prime(), &x.to_string()).unwrap(), x);
        }
    }
}
