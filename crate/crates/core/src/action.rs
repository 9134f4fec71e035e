//! The action of Q = (Z/p)^(r+1) on homology, given by one element B_i of
//! Λ₁ per generator τ_i.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fp::{FpMatrix, Prime, Subspace};
use crate::group_ring::{parse_element, GroupRingElement};
use crate::homology::HomologyModule;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisActionData {
    p: Prime,
    b: Vec<GroupRingElement>,
}

impl GaloisActionData {
    /// Validates that there are `(p - 1) / 2 + 1` elements and that each
    /// `B_i - 1` lies in ⟨y0 y1⟩, has augmentation one and order dividing p.
    pub fn new(p: Prime, b: Vec<GroupRingElement>) -> Result<Self> {
        let expected = p.half() + 1;
        if b.len() != expected {
            return Err(Error::DimensionMismatch {
                context: "number of action elements",
                expected,
                found: b.len(),
            });
        }
        let one = GroupRingElement::one(p);
        for (index, bi) in b.iter().enumerate() {
            let fail = |reason: String| Err(Error::InvalidAction { index, reason });
            if bi.prime() != p {
                return fail(format!("is defined mod {}, not mod {p}", bi.prime()));
            }
            if !(bi - &one).in_y0y1_ideal() {
                return fail("- 1 is not in ⟨y0y1⟩".into());
            }
            if bi.augmentation() != 1 {
                return fail(format!(
                    "has augmentation {}, expected 1",
                    bi.augmentation()
                ));
            }
            if bi.pow(p.get() as u64) != one {
                return fail("does not have order dividing p".into());
            }
        }
        Ok(GaloisActionData { p, b })
    }

    /// The two elements for p = 3:
    /// `B_σ = 1 + y0y1(1 - y0 - y1)` and `B_τ = 1 + y0y1(y0y1 - y0 - y1)`.
    pub fn builtin_p3() -> Self {
        let p = Prime::new(3).expect("3 is prime");
        let y0y1 = GroupRingElement::monomial(p, 1, 1);
        let one = GroupRingElement::one(p);
        let f_sigma = GroupRingElement::from_terms(p, &[(1, 0, 0), (-1, 1, 0), (-1, 0, 1)]);
        let f_tau = GroupRingElement::from_terms(p, &[(-1, 1, 0), (-1, 0, 1), (1, 1, 1)]);
        let b_sigma = &one + &(&y0y1 * &f_sigma);
        let b_tau = &one + &(&y0y1 * &f_tau);
        Self::new(p, vec![b_sigma, b_tau]).expect("built-in p = 3 action is valid")
    }

    /// The action with every B_i = 1.
    pub fn trivial(p: Prime) -> Self {
        Self::new(p, vec![GroupRingElement::one(p); p.half() + 1]).expect("trivial action is valid")
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    /// `r = (p - 1) / 2`; the Q-rank is `r + 1`.
    pub fn r(&self) -> usize {
        self.b.len() - 1
    }

    pub fn rank(&self) -> usize {
        self.b.len()
    }

    pub fn elements(&self) -> &[GroupRingElement] {
        &self.b
    }

    pub fn element(&self, i: usize) -> &GroupRingElement {
        &self.b[i]
    }

    /// Generator matrices on `m`, one per B_i.
    pub fn operators(&self, m: &HomologyModule) -> Result<Vec<FpMatrix>> {
        self.check_module(m)?;
        self.b.iter().map(|bi| m.induced_operator(bi)).collect()
    }

    /// Norm operators N_{τ_i} on `m`.
    pub fn norm_operators(&self, m: &HomologyModule) -> Result<Vec<FpMatrix>> {
        self.check_module(m)?;
        self.b
            .iter()
            .map(|bi| m.induced_operator(&bi.norm_element()))
            .collect()
    }

    /// `M^Q`, the common fixed space of every generator.
    pub fn invariants_subspace(&self, m: &HomologyModule) -> Result<Subspace> {
        let id = FpMatrix::identity(self.p, m.dim());
        let blocks: Vec<FpMatrix> = self.operators(m)?.iter().map(|op| op - &id).collect();
        let refs: Vec<&FpMatrix> = blocks.iter().collect();
        Ok(FpMatrix::vstack(self.p, m.dim(), &refs)?.kernel())
    }

    /// `[N(B_0), ..., N(B_r)]`.
    pub fn norm_check(&self) -> Vec<GroupRingElement> {
        self.b.iter().map(GroupRingElement::norm_element).collect()
    }

    /// `dim(Im(B_1 - 1) ∩ M^Q)`, a lower bound for the Heisenberg part of
    /// the kernel.
    pub fn lower_bound_dim(&self, m: &HomologyModule) -> Result<usize> {
        let id = FpMatrix::identity(self.p, m.dim());
        let op = &m.induced_operator(&self.b[1])? - &id;
        Ok(op.image().intersect(&self.invariants_subspace(m)?)?.dim())
    }

    /// Parses the action-file format: a `p = <int>` line followed by the
    /// lines `B[0] = ...` through `B[r] = ...` in order. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut p: Option<Prime> = None;
        let mut b = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(line_no, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "p" {
                if p.is_some() {
                    return Err(Error::parse(line_no, "p given twice"));
                }
                let q: u64 = value
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("invalid prime {value:?}")))?;
                p = Some(Prime::new(q)?);
                continue;
            }
            let prime = p.ok_or_else(|| Error::parse(line_no, "B line before the p line"))?;
            let index: usize = key
                .strip_prefix("B[")
                .and_then(|s| s.strip_suffix(']'))
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| Error::parse(line_no, format!("unknown key {key:?}")))?;
            if index != b.len() {
                return Err(Error::parse(
                    line_no,
                    format!("expected B[{}], found B[{index}]", b.len()),
                ));
            }
            b.push(parse_element(prime, value).map_err(|e| Error::parse(line_no, e))?);
        }
        let p = p.ok_or_else(|| Error::parse(1, "missing p line"))?;
        Self::new(p, b)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::parse(0, format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Serializes to the action-file format.
    pub fn export(&self) -> String {
        let mut out = format!("p = {}\n", self.p);
        for (i, bi) in self.b.iter().enumerate() {
            let _ = writeln!(out, "B[{i}] = {bi}");
        }
        out
    }

    fn check_module(&self, m: &HomologyModule) -> Result<()> {
        crate::fp::check_same(self.p, m.prime())
    }
}
