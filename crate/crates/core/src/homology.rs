//! The homology modules H1(U, Y), H1(U) and H1(X) of the degree-p Fermat
//! curve with F_p coefficients, as explicit coordinate spaces.
//!
//! H1(U, Y) is Λ₁ itself, H1(U) is the ideal ⟨y0 y1⟩, and H1(X) is the
//! quotient of H1(U) by the fixed space of ε0 ε1.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fp::{FpMatrix, Prime, Subspace};
use crate::group_ring::{GroupRingElement, MonomialOrder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModuleKind {
    UY,
    U,
    X,
}

impl ModuleKind {
    pub const ALL: [ModuleKind; 3] = [ModuleKind::UY, ModuleKind::U, ModuleKind::X];

    pub fn name(self) -> &'static str {
        match self {
            ModuleKind::UY => "UY",
            ModuleKind::U => "U",
            ModuleKind::X => "X",
        }
    }
}

impl fmt::Display for ModuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModuleKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "UY" => Ok(ModuleKind::UY),
            "U" => Ok(ModuleKind::U),
            "X" => Ok(ModuleKind::X),
            other => Err(Error::OutOfRange(format!(
                "unknown module {other:?}; expected UY, U or X"
            ))),
        }
    }
}

/// One of the three homology modules with its coordinate system.
///
/// Coordinates of UY are Λ₁ coordinates in the standard monomial order.
/// Coordinates of U are the monomials `y0^a y1^b` with `a, b >= 1`, in the
/// same relative order. Coordinates of X are classes of a monomial
/// complement of Stab inside U.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyModule {
    p: Prime,
    kind: ModuleKind,
    order: MonomialOrder,
    /// Λ₁ index of each U coordinate.
    u_monomials: Vec<usize>,
    /// `p^2 x dim(U)` coordinate inclusion of U into Λ₁.
    inclusion: FpMatrix,
    /// Fixed space of ε0 ε1 in U coordinates.
    stab: Subspace,
    /// U coordinates chosen as representatives of the X basis.
    complement: Vec<usize>,
    /// `dim(X) x dim(U)` quotient map.
    projection: FpMatrix,
    /// `dim(U) x dim(X)` section of the quotient map.
    lift: FpMatrix,
}

impl HomologyModule {
    pub fn new(p: Prime, kind: ModuleKind) -> Result<Self> {
        let order = MonomialOrder::standard(p);
        let n = p.get() as usize;
        let u_monomials: Vec<usize> = order
            .exponents()
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| a >= 1 && b >= 1)
            .map(|(i, _)| i)
            .collect();
        let du = u_monomials.len();
        let mut inclusion = FpMatrix::zeros(p, n * n, du);
        for (j, &i) in u_monomials.iter().enumerate() {
            inclusion.set(i, j, 1);
        }

        let e = &GroupRingElement::epsilon(p, 0) * &GroupRingElement::epsilon(p, 1);
        let e_u = restrict_operator(&e.regular_rep_matrix(&order)?, &inclusion)?;
        let stab = (&e_u - &FpMatrix::identity(p, du)).kernel();

        // Greedy monomial complement: keep e_j whenever it enlarges the span.
        let mut complement = Vec::new();
        let mut span = stab.clone();
        for j in 0..du {
            let mut ej = vec![0u32; du];
            ej[j] = 1;
            if !span.contains(&ej)? {
                span = span.sum(&Subspace::from_vectors(p, du, &[ej])?)?;
                complement.push(j);
            }
        }
        let dx = complement.len();
        let expected = (n - 1) * (n - 2);
        if dx != expected {
            return Err(Error::GenusMismatch {
                p: p.get(),
                expected,
                found: dx,
            });
        }
        let mut columns: Vec<Vec<u32>> = complement
            .iter()
            .map(|&j| {
                let mut v = vec![0u32; du];
                v[j] = 1;
                v
            })
            .collect();
        let lift = FpMatrix::from_columns(p, du, &columns)?;
        columns.extend(stab.basis_vectors());
        let change = FpMatrix::from_columns(p, du, &columns)?
            .inverse()
            .expect("complement and Stab together form a basis of U");
        let projection = change.submatrix(0..dx, 0..du);

        Ok(HomologyModule {
            p,
            kind,
            order,
            u_monomials,
            inclusion,
            stab,
            complement,
            projection,
            lift,
        })
    }

    pub fn uy(p: Prime) -> Result<Self> {
        Self::new(p, ModuleKind::UY)
    }

    pub fn u(p: Prime) -> Result<Self> {
        Self::new(p, ModuleKind::U)
    }

    pub fn x(p: Prime) -> Result<Self> {
        Self::new(p, ModuleKind::X)
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn kind(&self) -> ModuleKind {
        self.kind
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            ModuleKind::UY => self.order.len(),
            ModuleKind::U => self.u_monomials.len(),
            ModuleKind::X => self.complement.len(),
        }
    }

    pub fn dim_u(&self) -> usize {
        self.u_monomials.len()
    }

    /// Coordinate inclusion of H1(U) into Λ₁.
    pub fn inclusion(&self) -> &FpMatrix {
        &self.inclusion
    }

    /// The fixed space of ε0 ε1, in H1(U) coordinates.
    pub fn stab(&self) -> &Subspace {
        &self.stab
    }

    /// Quotient map H1(U) → H1(X).
    pub fn projection(&self) -> &FpMatrix {
        &self.projection
    }

    /// The section H1(X) → H1(U) sending each basis class to its monomial
    /// representative.
    pub fn lift(&self) -> &FpMatrix {
        &self.lift
    }

    /// Coordinates of `β`, the monomial 1. Only meaningful on UY.
    pub fn generator(&self) -> Result<Vec<u32>> {
        self.coordinates(&GroupRingElement::one(self.p))
    }

    /// Matrix of multiplication by `b` in this module's basis.
    pub fn induced_operator(&self, b: &GroupRingElement) -> Result<FpMatrix> {
        let on_uy = b.regular_rep_matrix(&self.order)?;
        match self.kind {
            ModuleKind::UY => Ok(on_uy),
            ModuleKind::U => restrict_operator(&on_uy, &self.inclusion),
            ModuleKind::X => {
                let on_u = restrict_operator(&on_uy, &self.inclusion)?;
                quotient_operator(&on_u, &self.stab, &self.projection, &self.lift)
            }
        }
    }

    /// Coordinates of a Λ₁ element in this module. For X the element must
    /// lie in ⟨y0 y1⟩ and is sent to its class.
    pub fn coordinates(&self, x: &GroupRingElement) -> Result<Vec<u32>> {
        let uy = self.order.coordinates(x);
        if self.kind == ModuleKind::UY {
            return Ok(uy);
        }
        if !x.in_y0y1_ideal() {
            return Err(Error::OutOfRange(format!("{x} does not lie in H1(U)")));
        }
        let u: Vec<u32> = self.u_monomials.iter().map(|&i| uy[i]).collect();
        match self.kind {
            ModuleKind::U => Ok(u),
            _ => self.projection.mul_vec(&u),
        }
    }

    /// A Λ₁ representative of a coordinate vector.
    pub fn element(&self, coords: &[u32]) -> Result<GroupRingElement> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                context: "module coordinates",
                expected: self.dim(),
                found: coords.len(),
            });
        }
        let uy = match self.kind {
            ModuleKind::UY => coords.to_vec(),
            ModuleKind::U => self.inclusion.mul_vec(coords)?,
            ModuleKind::X => self.inclusion.mul_vec(&self.lift.mul_vec(coords)?)?,
        };
        self.order.element(&uy)
    }

    /// Human-readable name of each basis vector.
    pub fn basis_labels(&self) -> Vec<String> {
        let label = |i: usize| {
            let (a, b) = self.order.exponents()[i];
            GroupRingElement::monomial(self.p, a, b).to_string()
        };
        match self.kind {
            ModuleKind::UY => (0..self.dim()).map(label).collect(),
            ModuleKind::U => self.u_monomials.iter().map(|&i| label(i)).collect(),
            ModuleKind::X => self
                .complement
                .iter()
                .map(|&j| format!("[{}]", label(self.u_monomials[j])))
                .collect(),
        }
    }

    /// Renders a coordinate vector as a group-ring expression; X vectors are
    /// shown through their monomial representatives in brackets.
    pub fn format_vector(&self, coords: &[u32]) -> Result<String> {
        let element = self.element(coords)?.to_string();
        Ok(match self.kind {
            ModuleKind::X if element != "0" => format!("[{element}]"),
            _ => element,
        })
    }
}

/// Restricts `op` to the subspace spanned by the columns of `embedding`
/// (which must be linearly independent). Returns `S` with
/// `op * embedding = embedding * S`, or an error naming the first basis
/// vector whose image leaves the subspace.
pub fn restrict_operator(op: &FpMatrix, embedding: &FpMatrix) -> Result<FpMatrix> {
    let images = op.checked_mul(embedding)?;
    let mut columns = Vec::with_capacity(embedding.cols());
    for j in 0..embedding.cols() {
        let target = images.column(j);
        match embedding.solve(&target)? {
            Some(x) => columns.push(x),
            None => {
                return Err(Error::NotInvariant(format!(
                    "image of basis vector {j} is {:?}, outside the subspace",
                    target
                )))
            }
        }
    }
    FpMatrix::from_columns(op.prime(), embedding.cols(), &columns)
}

/// The operator induced by `op` on the quotient by `sub`, given the quotient
/// map and a section of it.
pub fn quotient_operator(
    op: &FpMatrix,
    sub: &Subspace,
    projection: &FpMatrix,
    lift: &FpMatrix,
) -> Result<FpMatrix> {
    for (k, v) in sub.basis_vectors().into_iter().enumerate() {
        let image = op.mul_vec(&v)?;
        if !sub.contains(&image)? {
            return Err(Error::NotInvariant(format!(
                "image {image:?} of quotient kernel vector {k} leaves the kernel"
            )));
        }
    }
    Ok(&(projection * op) * lift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p3() -> Prime {
        Prime::new(3).unwrap()
    }

    #[test]
    fn dimensions() {
        let p = p3();
        assert_eq!(HomologyModule::uy(p).unwrap().dim(), 9);
        assert_eq!(HomologyModule::u(p).unwrap().dim(), 4);
        assert_eq!(HomologyModule::x(p).unwrap().dim(), 2);
        for q in [3u64, 5, 7] {
            let p = Prime::new(q).unwrap();
            let x = HomologyModule::x(p).unwrap();
            let n = q as usize;
            assert_eq!(x.dim(), (n - 1) * (n - 2));
            assert_eq!(x.stab().dim(), n - 1);
            assert_eq!(HomologyModule::uy(p).unwrap().dim(), n * n);
        }
    }

    #[test]
    fn u_basis_is_the_augmentation_monomials() {
        let p = p3();
        let u = HomologyModule::u(p).unwrap();
        assert_eq!(
            u.basis_labels(),
            ["1*y0^1*y1^1", "1*y0^1*y1^2", "1*y0^2*y1^1", "1*y0^2*y1^2"]
        );
        // brute force: the monomials of Λ₁ lying in the ideal
        let count = (0..3)
            .flat_map(|a| (0..3).map(move |b| (a, b)))
            .filter(|&(a, b)| GroupRingElement::monomial(p, a, b).in_y0y1_ideal())
            .count();
        assert_eq!(count, 4);
    }

    #[test]
    fn stab_matches_brute_force_at_three() {
        let p = p3();
        let u = HomologyModule::u(p).unwrap();
        let e = &GroupRingElement::epsilon(p, 0) * &GroupRingElement::epsilon(p, 1);
        let mut fixed = Vec::new();
        for k in 0..81u32 {
            let coords: Vec<u32> = (0..4).map(|i| (k / 3u32.pow(i)) % 3).collect();
            let m = u.element(&coords).unwrap();
            if &e * &m == m {
                fixed.push(coords);
            }
        }
        assert_eq!(fixed.len(), 9);
        for v in &fixed {
            assert!(u.stab().contains(v).unwrap());
        }
        assert_eq!(Subspace::from_vectors(p, 4, &fixed).unwrap(), *u.stab());
    }

    #[test]
    fn x_basis_at_three() {
        let x = HomologyModule::x(p3()).unwrap();
        assert_eq!(x.basis_labels(), ["[1*y0^1*y1^1]", "[1*y0^1*y1^2]"]);
        // y0 y1^2 and y0^2 y1 have the same class, y0^2 y1^2 is trivial
        let p = p3();
        let a = x.coordinates(&GroupRingElement::monomial(p, 1, 2)).unwrap();
        let b = x.coordinates(&GroupRingElement::monomial(p, 2, 1)).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            x.coordinates(&GroupRingElement::monomial(p, 2, 2)).unwrap(),
            vec![0, 0]
        );
    }

    #[test]
    fn induced_operator_examples() {
        let p = p3();
        let uy = HomologyModule::uy(p).unwrap();
        assert!(uy
            .induced_operator(&GroupRingElement::one(p))
            .unwrap()
            .is_identity());

        let u = HomologyModule::u(p).unwrap();
        let unit = GroupRingElement::from_terms(p, &[(1, 0, 0), (1, 1, 1)]);
        let op = u.induced_operator(&unit).unwrap();
        assert_eq!(op.column(0), vec![1, 0, 0, 1]);
    }

    #[test]
    fn coordinates_reject_elements_outside_u() {
        let x = HomologyModule::x(p3()).unwrap();
        assert!(x.coordinates(&GroupRingElement::one(p3())).is_err());
    }

    #[test]
    fn restrict_rejects_non_invariant_subspaces() {
        let p = p3();
        let order = MonomialOrder::standard(p);
        // multiplication by y0 moves 1 out of span{1}
        let op = GroupRingElement::y0(p).regular_rep_matrix(&order).unwrap();
        let mut e = FpMatrix::zeros(p, 9, 1);
        e.set(0, 0, 1);
        assert!(matches!(
            restrict_operator(&op, &e),
            Err(Error::NotInvariant(_))
        ));
    }

    fn unit(q: u64) -> impl Strategy<Value = GroupRingElement> {
        proptest::collection::vec(0i64..q as i64, (q * q) as usize).prop_map(move |v| {
            let p = Prime::new(q).unwrap();
            let n = q as usize;
            let mut terms: Vec<_> = v
                .iter()
                .enumerate()
                .map(|(k, &c)| (c, k / n, k % n))
                .collect();
            terms[0].0 = 1 + (v[0] % (q as i64 - 1));
            GroupRingElement::from_terms(p, &terms)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn induced_operator_is_multiplicative(b1 in unit(3), b2 in unit(3)) {
            for kind in ModuleKind::ALL {
                let m = HomologyModule::new(b1.prime(), kind).unwrap();
                let lhs = m.induced_operator(&(&b1 * &b2)).unwrap();
                let rhs = &m.induced_operator(&b1).unwrap() * &m.induced_operator(&b2).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        #[test]
        fn projection_commutes_with_operators(b in unit(5)) {
            let p = b.prime();
            let u = HomologyModule::u(p).unwrap();
            let x = HomologyModule::x(p).unwrap();
            let lhs = x.projection() * &u.induced_operator(&b).unwrap();
            let rhs = &x.induced_operator(&b).unwrap() * x.projection();
            prop_assert_eq!(lhs, rhs);
            let uy_op = HomologyModule::uy(p).unwrap().induced_operator(&b).unwrap();
            prop_assert_eq!(&uy_op * u.inclusion(), u.inclusion() * &u.induced_operator(&b).unwrap());
        }
    }
}
