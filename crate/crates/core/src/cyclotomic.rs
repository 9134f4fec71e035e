//! Exact arithmetic in `Z[w] = Z[x]/Φ(x)` with `w = ζ_{p^2}` and
//! `Φ(x) = Σ_{j<p} x^{jp}` the `p^2`-th cyclotomic polynomial.
//!
//! Elements are stored in the power basis `1, w, ..., w^{p(p-1)-1}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::fp::Prime;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CyclotomicInteger {
    p: u32,
    coeffs: Vec<BigInt>,
}

fn order(p: u32) -> usize {
    (p * p) as usize
}

fn degree(p: u32) -> usize {
    (p * (p - 1)) as usize
}

impl CyclotomicInteger {
    pub fn zero(p: Prime) -> Self {
        CyclotomicInteger {
            p: p.get(),
            coeffs: vec![BigInt::zero(); degree(p.get())],
        }
    }

    pub fn one(p: Prime) -> Self {
        Self::from_integer(p, BigInt::one())
    }

    pub fn from_integer(p: Prime, n: impl Into<BigInt>) -> Self {
        let mut x = Self::zero(p);
        x.coeffs[0] = n.into();
        x
    }

    /// `w^k` for any integer k.
    pub fn w_pow(p: Prime, k: i64) -> Self {
        let mut cyclic = vec![BigInt::zero(); order(p.get())];
        cyclic[k.rem_euclid(order(p.get()) as i64) as usize] = BigInt::one();
        Self::from_cyclic(p.get(), cyclic)
    }

    /// `ζ_p^k = w^{pk}`.
    pub fn zeta_p_pow(p: Prime, k: i64) -> Self {
        Self::w_pow(p, k * p.get() as i64)
    }

    /// `1 − w^k`.
    pub fn one_minus_w_pow(p: Prime, k: i64) -> Self {
        &Self::one(p) - &Self::w_pow(p, k)
    }

    /// Reduces a polynomial in `Z[x]/(x^{p^2} − 1)` modulo Φ, using
    /// `x^{p(p-1)+s} = −Σ_{j<p-1} x^{jp+s}`.
    fn from_cyclic(p: u32, mut cyclic: Vec<BigInt>) -> Self {
        let deg = degree(p);
        for s in 0..p as usize {
            let top = std::mem::take(&mut cyclic[deg + s]);
            if top.is_zero() {
                continue;
            }
            for j in 0..(p - 1) as usize {
                cyclic[j * p as usize + s] -= &top;
            }
        }
        cyclic.truncate(deg);
        CyclotomicInteger { p, coeffs: cyclic }
    }

    pub fn prime(&self) -> Prime {
        Prime::new(self.p as u64).expect("stored prime")
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.prime());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The automorphism `w ↦ w^k` for k prime to p.
    pub fn apply_automorphism(&self, k: i64) -> Result<Self> {
        let n = order(self.p) as i64;
        let k = k.rem_euclid(n);
        if k % self.p as i64 == 0 {
            return Err(Error::OutOfRange(format!(
                "w -> w^{k} is not an automorphism"
            )));
        }
        let mut cyclic = vec![BigInt::zero(); n as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            cyclic[(i as i64 * k % n) as usize] += c;
        }
        Ok(Self::from_cyclic(self.p, cyclic))
    }

    /// `τ0^times`, acting by `w ↦ w^{(1+p)^times}`.
    pub fn tau0_apply(&self, times: u32) -> Self {
        let n = order(self.p) as u64;
        let mut e = 1u64;
        for _ in 0..times {
            e = e * (1 + self.p as u64) % n;
        }
        self.apply_automorphism(e as i64)
            .expect("1 + p is prime to p")
    }

    /// True when the element lies in `Z[ζ_p]`, i.e. only powers `w^{jp}`
    /// occur.
    pub fn in_zeta_p_subring(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(i, c)| i % self.p as usize == 0 || c.is_zero())
    }

    /// `Π_{l<p} τ0^l(x)`, the norm down to `Q(ζ_p)`.
    pub fn norm_to_k(&self) -> Result<Self> {
        let mut acc = Self::one(self.prime());
        for l in 0..self.p {
            acc = &acc * &self.tau0_apply(l);
        }
        if !acc.in_zeta_p_subring() {
            return Err(Error::NotInSubring(acc.to_string()));
        }
        Ok(acc)
    }

    /// Divides exactly by `1 − w` when possible, via
    /// `x / (1 − w) = x · C / p` with `C = Π_{k ≠ 1} (1 − w^k)` over the
    /// units `k` mod `p^2`, since the full product is `Φ(1) = p`.
    pub fn divide_by_one_minus_w(&self) -> Option<Self> {
        let p = self.prime();
        let n = order(self.p) as i64;
        let mut c = Self::one(p);
        for k in 2..n {
            if k % self.p as i64 != 0 {
                c = &c * &Self::one_minus_w_pow(p, k);
            }
        }
        let prod = self * &c;
        let modulus = BigInt::from(self.p);
        let mut out = Vec::with_capacity(prod.coeffs.len());
        for x in &prod.coeffs {
            let (q, r) = x.div_rem(&modulus);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(CyclotomicInteger {
            p: self.p,
            coeffs: out,
        })
    }

    /// The largest k with `x ∈ (1 − w)^k`, or `None` for zero.
    pub fn valuation(&self) -> Option<u32> {
        if self.is_zero() {
            return None;
        }
        let mut k = 0;
        let mut x = self.clone();
        while let Some(y) = x.divide_by_one_minus_w() {
            x = y;
            k += 1;
        }
        Some(k)
    }
}

fn checked_prime(a: &CyclotomicInteger, b: &CyclotomicInteger) {
    assert_eq!(a.p, b.p, "cyclotomic integers over different primes");
}

impl Add for &CyclotomicInteger {
    type Output = CyclotomicInteger;
    fn add(self, rhs: &CyclotomicInteger) -> CyclotomicInteger {
        checked_prime(self, rhs);
        CyclotomicInteger {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CyclotomicInteger {
    type Output = CyclotomicInteger;
    fn sub(self, rhs: &CyclotomicInteger) -> CyclotomicInteger {
        checked_prime(self, rhs);
        CyclotomicInteger {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &CyclotomicInteger {
    type Output = CyclotomicInteger;
    fn neg(self) -> CyclotomicInteger {
        CyclotomicInteger {
            p: self.p,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &CyclotomicInteger {
    type Output = CyclotomicInteger;
    fn mul(self, rhs: &CyclotomicInteger) -> CyclotomicInteger {
        checked_prime(self, rhs);
        let n = order(self.p);
        let mut cyclic = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    cyclic[(i + j) % n] += a * b;
                }
            }
        }
        CyclotomicInteger::from_cyclic(self.p, cyclic)
    }
}

impl fmt::Display for CyclotomicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => write!(f, "w^{i}")?,
                (_, false) => write!(f, "{a}*w^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CyclotomicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicInteger(p={}, {self})", self.p)
    }
}

fn check_index(p: Prime, i: u32) -> Result<()> {
    if i == 0 || i as usize > p.half() {
        return Err(Error::OutOfRange(format!(
            "I must satisfy 1 <= I <= {}, got {i}",
            p.half()
        )));
    }
    Ok(())
}

/// `γ_I = Π_{j=1}^{p-1} (1 − w^{pj − I})^j`.
pub fn gamma(p: Prime, i: u32) -> Result<CyclotomicInteger> {
    check_index(p, i)?;
    let mut acc = CyclotomicInteger::one(p);
    for j in 1..p.get() {
        let factor = CyclotomicInteger::one_minus_w_pow(p, (p.get() * j) as i64 - i as i64);
        acc = &acc * &factor.pow(j as u64);
    }
    Ok(acc)
}

/// The exponent J with `−I·J ≡ 1 (mod p)`.
pub fn tau_alpha_exponent(p: Prime, i: u32) -> Result<u32> {
    check_index(p, i)?;
    Ok(p.inv(p.neg(i)))
}

/// Checks `τ0^times(γ_I)·(1 − ζ_p^{−I}) = (1 − w^{−I})^p·γ_I`.
pub fn gamma_action_holds(p: Prime, i: u32, times: u32) -> Result<bool> {
    let g = gamma(p, i)?;
    let lhs = &g.tau0_apply(times)
        * &(&CyclotomicInteger::one(p) - &CyclotomicInteger::zeta_p_pow(p, -(i as i64)));
    let rhs = &CyclotomicInteger::one_minus_w_pow(p, -(i as i64)).pow(p.get() as u64) * &g;
    Ok(lhs == rhs)
}

/// The action identity for `τ_α = τ0^J`.
pub fn verify_gamma_action(p: Prime, i: u32) -> Result<bool> {
    gamma_action_holds(p, i, tau_alpha_exponent(p, i)?)
}

/// `p^2 + p(p − 1)/2`.
pub fn conductor_heisenberg(p: Prime) -> u64 {
    let p = p.get() as u64;
    p * p + p * (p - 1) / 2
}

/// `p^3 − 2p^2 + 2p`.
pub fn conductor_cyclotomic(p: Prime) -> u64 {
    let p = p.get() as u64;
    p * p * p - 2 * p * p + 2 * p
}
