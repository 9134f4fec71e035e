//! The concrete p = 3 data: action elements, the action on the seven
//! dimensional quotient N₇ of N, its extension vectors, eight sample
//! invariant maps and the list of conductor jumps.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::action::GaloisActionData;
use crate::cohomology::{format_vector, ExtensionClassData, NData, QModule};
use crate::error::{Error, Result};
use crate::fp::{FpMatrix, Prime};
use crate::group_ring::GroupRingElement;
use crate::homology::HomologyModule;

pub const DATASET_NAMES: [&str; 6] = [
    "p3-action",
    "p3-N7-action",
    "p3-abc",
    "p3-N7",
    "p3-A-maps",
    "p3-conductor-jumps",
];

/// Row `i` is the image of ξ_{i+1} under σ.
const M_SIGMA_7: [[i64; 7]; 7] = [
    [1, 0, 1, 0, 1, 0, 1],
    [0, 1, 0, 0, 0, 2, 0],
    [0, 0, 1, 2, 0, 2, 2],
    [0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 1, 2, 0],
    [0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 1],
];

/// Row `i` is the image of ξ_{i+1} under τ.
const M_TAU_7: [[i64; 7]; 7] = [
    [1, 0, 0, 1, 2, 1, 2],
    [0, 1, 0, 1, 0, 2, 1],
    [0, 0, 1, 0, 0, 1, 0],
    [0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 1],
];

const A_7: [u32; 7] = [0, 2, 0, 2, 1, 0, 2];
const B_7: [u32; 7] = [0, 0, 0, 0, 0, 0, 2];
const C_7: [u32; 7] = [2, 1, 2, 0, 2, 1, 0];

const CONDUCTOR_JUMPS: [u32; 10] = [12, 15, 18, 20, 21, 23, 24, 26, 27, 28];

/// A term `(coefficient, a, b)` of `c * y0^a * y1^b`.
type Term = (i64, usize, usize);

/// A named map given by `(ξ index, image terms)` pairs.
type MapImages = (&'static str, Vec<(usize, Vec<Term>)>);

/// `(ξ index, image)` pairs for the maps A11, ..., A18; ξ indices are
/// 1-based and unlisted generators map to zero.
fn a_map_images() -> Vec<MapImages> {
    let mut maps = vec![
        (
            "A11",
            vec![
                (1, vec![(1, 0, 1)]),
                (4, vec![(1, 1, 2), (1, 2, 2)]),
                (5, vec![(1, 1, 2)]),
                (7, vec![(-1, 1, 2), (-1, 2, 2)]),
            ],
        ),
        (
            "A12",
            vec![
                (1, vec![(1, 1, 0)]),
                (4, vec![(1, 2, 1), (1, 2, 2)]),
                (5, vec![(1, 2, 1)]),
                (7, vec![(-1, 1, 2), (-1, 2, 2)]),
            ],
        ),
        (
            "A13",
            vec![
                (1, vec![(1, 1, 1)]),
                (4, vec![(1, 2, 2)]),
                (5, vec![(1, 2, 2)]),
                (7, vec![(-1, 2, 2)]),
            ],
        ),
    ];
    let tails = [
        ("A14", (0, 2)),
        ("A15", (1, 2)),
        ("A16", (2, 0)),
        ("A17", (2, 1)),
        ("A18", (2, 2)),
    ];
    for (name, (a, b)) in tails {
        maps.push((
            name,
            vec![
                (3, vec![(1, a, b)]),
                (4, vec![(-1, a, b)]),
                (5, vec![(1, a, b)]),
                (7, vec![(1, a, b)]),
            ],
        ));
    }
    maps
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Payload {
    Action(GaloisActionData),
    /// Matrices in the row convention: row `i` is the image of basis vector `i`.
    RowMatrices(Vec<FpMatrix>),
    Vectors(BTreeMap<&'static str, Vec<u32>>),
    NData(NData),
    /// Named `dim(H1(U, Y)) x 7` matrices acting on column vectors.
    Maps(Vec<(&'static str, FpMatrix)>),
    Integers(Vec<u32>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    pub name: &'static str,
    pub citation: &'static str,
    pub payload: Payload,
}

fn p3() -> Prime {
    Prime::new(3).expect("3 is prime")
}

fn row_matrix(rows: &[[i64; 7]; 7]) -> FpMatrix {
    FpMatrix::from_rows(p3(), rows).expect("rows have equal length")
}

/// The module N₇ with σ, τ acting through the printed matrices.
pub fn n7_module() -> QModule {
    QModule::from_row_convention(p3(), 7, vec![row_matrix(&M_SIGMA_7), row_matrix(&M_TAU_7)])
        .expect("printed N7 action is a valid Q-module")
}

/// The extension vectors with `a[0] = a₇`, `a[1] = b₇` and
/// `c[0,1] = −c₇`, since `c₇ = [s(σ), s(τ)]` while
/// `c[0,1] = [s(τ), s(σ)]`.
pub fn n7_extension() -> ExtensionClassData {
    let c_01 = C_7.iter().map(|&x| (3 - x) % 3).collect();
    let c = BTreeMap::from([((0, 1), c_01)]);
    ExtensionClassData::new(p3(), 7, vec![A_7.to_vec(), B_7.to_vec()], c)
        .expect("printed extension data has dimension 7")
}

pub fn n7() -> NData {
    NData {
        module: n7_module(),
        extension: Some(n7_extension()),
    }
}

/// The eight maps A11, ..., A18 as matrices `N₇ → H1(U, Y)`.
pub fn a_maps() -> Vec<(&'static str, FpMatrix)> {
    let p = p3();
    let uy = HomologyModule::uy(p).expect("p = 3 homology");
    a_map_images()
        .into_iter()
        .map(|(name, images)| {
            let mut m = FpMatrix::zeros(p, uy.dim(), 7);
            for (xi, terms) in images {
                let v = uy
                    .coordinates(&GroupRingElement::from_terms(p, &terms))
                    .expect("every element lies in H1(U, Y)");
                for (row, &x) in v.iter().enumerate() {
                    m.set(row, xi - 1, x as i64);
                }
            }
            (name, m)
        })
        .collect()
}

/// What the quotient `N_ℓ` is known to be, where that is recorded.
pub fn quotient_tag(l: usize) -> Option<&'static str> {
    match l {
        1 => Some("heisenberg"),
        2 => Some("heisenberg+cyclotomic"),
        _ => None,
    }
}

/// `N_ℓ` for `1 <= ℓ <= 7`: the quotient onto the first ℓ coordinates,
/// with the pushed-forward extension data and the surjection `N₇ → N_ℓ`.
pub fn n_ell(l: usize) -> Result<(NData, FpMatrix)> {
    if !(1..=7).contains(&l) {
        return Err(Error::OutOfRange(format!(
            "N_l is defined for 1 <= l <= 7, got {l}"
        )));
    }
    let (module, surjection) = n7_module().leading_quotient(l)?;
    let extension = n7_extension().push_forward(&surjection)?;
    Ok((
        NData {
            module,
            extension: Some(extension),
        },
        surjection,
    ))
}

pub fn dataset(name: &str) -> Result<Dataset> {
    let (name, citation, payload) = match name {
        "p3-action" => (
            "p3-action",
            "p = 3 action elements B_sigma, B_tau on H1(U, Y)",
            Payload::Action(GaloisActionData::builtin_p3()),
        ),
        "p3-N7-action" => (
            "p3-N7-action",
            "p = 3 matrices of sigma and tau on N_7, rows are images of xi_1..xi_7",
            Payload::RowMatrices(vec![row_matrix(&M_SIGMA_7), row_matrix(&M_TAU_7)]),
        ),
        "p3-abc" => (
            "p3-abc",
            "p = 3 images a_7, b_7, c_7 of the extension elements in N_7",
            Payload::Vectors(BTreeMap::from([
                ("a7", A_7.to_vec()),
                ("b7", B_7.to_vec()),
                ("c7", C_7.to_vec()),
            ])),
        ),
        "p3-N7" => (
            "p3-N7",
            "p = 3 module N_7 with its extension data",
            Payload::NData(n7()),
        ),
        "p3-A-maps" => (
            "p3-A-maps",
            "p = 3 invariant maps A11..A18 from N_7 to H1(U, Y)",
            Payload::Maps(a_maps()),
        ),
        "p3-conductor-jumps" => (
            "p3-conductor-jumps",
            "p = 3 conductors indexing the filtration N_1, ..., N_10",
            Payload::Integers(CONDUCTOR_JUMPS.to_vec()),
        ),
        other => {
            return Err(Error::UnknownDataset {
                name: other.to_string(),
                available: DATASET_NAMES.to_vec(),
            })
        }
    };
    Ok(Dataset {
        name,
        citation,
        payload,
    })
}

fn write_matrix(out: &mut String, m: &FpMatrix) {
    for r in 0..m.rows() {
        let cells: Vec<String> = m.row(r).iter().map(u32::to_string).collect();
        let _ = writeln!(out, "{}", cells.join(" "));
    }
}

impl Dataset {
    /// Canonical text form. Actions and N-data use their file formats.
    pub fn export(&self) -> String {
        let mut out = format!("# {}: {}\n", self.name, self.citation);
        match &self.payload {
            Payload::Action(a) => out.push_str(&a.export()),
            Payload::NData(n) => out.push_str(&n.export()),
            Payload::RowMatrices(ms) => {
                for (i, m) in ms.iter().enumerate() {
                    let _ = writeln!(out, "M[{i}]");
                    write_matrix(&mut out, m);
                }
            }
            Payload::Vectors(vs) => {
                for (k, v) in vs {
                    let _ = writeln!(out, "{k} = {}", format_vector(v));
                }
            }
            Payload::Maps(ms) => {
                for (k, m) in ms {
                    let _ = writeln!(out, "{k}");
                    write_matrix(&mut out, m);
                }
            }
            Payload::Integers(xs) => {
                let cells: Vec<String> = xs.iter().map(u32::to_string).collect();
                let _ = writeln!(out, "{}", cells.join(", "));
            }
        }
        out
    }
}

/// SHA-256 (hex) of the concatenated exports of every dataset.
pub fn checksum() -> String {
    let mut hasher = Sha256::new();
    for name in DATASET_NAMES {
        hasher.update(dataset(name).expect("listed dataset").export().as_bytes());
    }
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
