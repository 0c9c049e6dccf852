//! The complete MUB catalogs for d = 5 (bases A–F) and d = 4 (bases A–E).
//!
//! Entries are generated from exponent tables of roots of unity rather than
//! stored as floating literals: ω = e^{2πi/5} for d = 5 and powers of i for
//! d = 4. Column j of each matrix is eigenstate j; column and label order are
//! significant because triplet classes are label dependent.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{UnitaryMatrix, C64};
use crate::tolerance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BasisLabel {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl BasisLabel {
    pub const ALL: [BasisLabel; 6] = [
        BasisLabel::A,
        BasisLabel::B,
        BasisLabel::C,
        BasisLabel::D,
        BasisLabel::E,
        BasisLabel::F,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    pub fn letter(self) -> char {
        (b'A' + self as u8) as char
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c.to_ascii_uppercase() {
            'A' => Ok(BasisLabel::A),
            'B' => Ok(BasisLabel::B),
            'C' => Ok(BasisLabel::C),
            'D' => Ok(BasisLabel::D),
            'E' => Ok(BasisLabel::E),
            'F' => Ok(BasisLabel::F),
            other => Err(Error::UnknownLabel(other)),
        }
    }

    /// Parses a string such as `"ABE"`.
    pub fn parse_list(s: &str) -> Result<Vec<Self>> {
        s.chars().filter(|c| !c.is_whitespace() && *c != ',').map(Self::from_char).collect()
    }

    /// Labels available in a complete set of dimension `dim` (d + 1 bases).
    pub fn for_dim(dim: usize) -> &'static [BasisLabel] {
        &Self::ALL[..(dim + 1).min(6)]
    }

    pub fn valid_for(self, dim: usize) -> bool {
        self.index() <= dim
    }

    pub fn format_list(labels: &[BasisLabel]) -> String {
        labels.iter().map(|l| l.letter()).collect()
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Supported Hilbert-space dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dimension {
    Four,
    Five,
}

impl Dimension {
    pub fn value(self) -> usize {
        match self {
            Dimension::Four => 4,
            Dimension::Five => 5,
        }
    }
}

impl TryFrom<usize> for Dimension {
    type Error = Error;

    fn try_from(dim: usize) -> Result<Self> {
        match dim {
            4 => Ok(Dimension::Four),
            5 => Ok(Dimension::Five),
            other => Err(Error::UnsupportedDimension(other)),
        }
    }
}

/// An orthonormal basis; the columns of `matrix` are its eigenstates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Basis<const D: usize> {
    pub label: BasisLabel,
    pub matrix: UnitaryMatrix<D>,
}

impl<const D: usize> Basis<D> {
    pub fn new(label: BasisLabel, matrix: UnitaryMatrix<D>) -> Result<Self> {
        if !label.valid_for(D) {
            return Err(Error::InvalidLabel { label, dim: D });
        }
        Ok(Self { label, matrix })
    }

    /// Eigenstate `j` as a state vector.
    pub fn eigenstate(&self, j: usize) -> crate::linalg::StateVector<D> {
        crate::linalg::StateVector::from_normalized_unchecked(self.matrix.column(j))
    }
}

// Exponents of ω = e^{2πi/5}; entry (row, col) of √5·{|x_j⟩}.
const D5_B: [[u8; 5]; 5] = [
    [0, 0, 0, 0, 0],
    [0, 1, 2, 3, 4],
    [0, 2, 4, 1, 3],
    [0, 3, 1, 4, 2],
    [0, 4, 3, 2, 1],
];
const D5_C: [[u8; 5]; 5] = [
    [0, 0, 0, 0, 0],
    [1, 2, 3, 4, 0],
    [4, 1, 3, 0, 2],
    [4, 2, 0, 3, 1],
    [1, 0, 4, 3, 2],
];
const D5_D: [[u8; 5]; 5] = [
    [0, 0, 0, 0, 0],
    [3, 4, 0, 1, 2],
    [2, 4, 1, 3, 0],
    [2, 0, 3, 1, 4],
    [3, 2, 1, 0, 4],
];
const D5_E: [[u8; 5]; 5] = [
    [0, 0, 0, 0, 0],
    [2, 3, 4, 0, 1],
    [3, 0, 2, 4, 1],
    [3, 1, 4, 2, 0],
    [2, 1, 0, 4, 3],
];
const D5_F: [[u8; 5]; 5] = [
    [0, 0, 0, 0, 0],
    [4, 0, 1, 2, 3],
    [1, 3, 0, 2, 4],
    [1, 4, 2, 0, 3],
    [4, 3, 2, 1, 0],
];

// Exponents of i; entry (row, col) of 2·{|x_j⟩}.
const D4_B: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 0, 2, 2], [0, 2, 2, 0], [0, 2, 0, 2]];
const D4_C: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 0, 2, 2], [3, 1, 1, 3], [1, 3, 1, 3]];
const D4_D: [[u8; 4]; 4] = [[0, 0, 0, 0], [1, 3, 1, 3], [2, 2, 0, 0], [1, 3, 3, 1]];
const D4_E: [[u8; 4]; 4] = [[0, 0, 0, 0], [1, 3, 1, 3], [1, 3, 3, 1], [2, 2, 0, 0]];

/// ω^k for the d-th root of unity.
pub fn root_of_unity(dim: usize, k: i64) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * k.rem_euclid(dim as i64) as f64 / dim as f64)
}

fn hadamard_from_exponents<const D: usize>(order: usize, exp: impl Fn(usize, usize) -> u8) -> UnitaryMatrix<D> {
    let scale = (D as f64).sqrt().recip();
    let entries = std::array::from_fn(|i| {
        std::array::from_fn(|j| root_of_unity(order, exp(i, j) as i64) * scale)
    });
    UnitaryMatrix::from_entries_unchecked(entries)
}

/// A labelled collection of bases of one dimension, in label order.
#[derive(Clone, Debug, PartialEq)]
pub struct MubSet<const D: usize> {
    bases: Vec<Basis<D>>,
}

impl<const D: usize> MubSet<D> {
    /// The complete catalog: six bases for d = 5, five for d = 4.
    pub fn standard() -> Result<Self> {
        let tables: Vec<UnitaryMatrix<D>> = match D {
            5 => [D5_B, D5_C, D5_D, D5_E, D5_F]
                .iter()
                .map(|t| hadamard_from_exponents::<D>(5, |i, j| t[i][j]))
                .collect(),
            4 => [D4_B, D4_C, D4_D, D4_E]
                .iter()
                .map(|t| hadamard_from_exponents::<D>(4, |i, j| t[i][j]))
                .collect(),
            other => return Err(Error::UnsupportedDimension(other)),
        };
        let mut bases = vec![Basis { label: BasisLabel::A, matrix: UnitaryMatrix::identity() }];
        for (label, matrix) in BasisLabel::ALL[1..].iter().zip(tables) {
            bases.push(Basis { label: *label, matrix });
        }
        Ok(Self { bases })
    }

    /// Assembles a set from arbitrary bases. Unbiasedness is not checked;
    /// see [`MubSet::verify_mutual_unbiasedness`].
    pub fn from_bases(bases: Vec<Basis<D>>) -> Result<Self> {
        if bases.len() < 2 || bases.len() > D + 1 {
            return Err(Error::BasisCount { min: 2, max: D + 1, got: bases.len() });
        }
        for (i, b) in bases.iter().enumerate() {
            if !b.label.valid_for(D) {
                return Err(Error::InvalidLabel { label: b.label, dim: D });
            }
            if bases[..i].iter().any(|o| o.label == b.label) {
                return Err(Error::RepeatedBasis(b.label));
            }
            let deviation = b.matrix.unitarity_deviation();
            if deviation > tolerance::UNITARITY {
                return Err(Error::NotUnitary { deviation });
            }
        }
        Ok(Self { bases })
    }

    pub fn dim(&self) -> usize {
        D
    }

    pub fn bases(&self) -> &[Basis<D>] {
        &self.bases
    }

    pub fn labels(&self) -> Vec<BasisLabel> {
        self.bases.iter().map(|b| b.label).collect()
    }

    pub fn basis(&self, label: BasisLabel) -> Result<&Basis<D>> {
        self.bases
            .iter()
            .find(|b| b.label == label)
            .ok_or(Error::InvalidLabel { label, dim: D })
    }

    /// Copies out the named bases, rejecting repeats and unknown labels.
    pub fn select(&self, labels: &[BasisLabel]) -> Result<Vec<Basis<D>>> {
        let mut out = Vec::with_capacity(labels.len());
        for (i, &label) in labels.iter().enumerate() {
            if labels[..i].contains(&label) {
                return Err(Error::RepeatedBasis(label));
            }
            out.push(*self.basis(label)?);
        }
        Ok(out)
    }

    /// Replaces the basis carrying the same label.
    pub fn with_basis(&self, basis: Basis<D>) -> Result<Self> {
        let mut bases = self.bases.clone();
        let slot = bases
            .iter_mut()
            .find(|b| b.label == basis.label)
            .ok_or(Error::InvalidLabel { label: basis.label, dim: D })?;
        *slot = basis;
        Self::from_bases(bases)
    }

    /// Largest | |⟨x_i|y_j⟩|² − 1/d | over all pairs of distinct bases.
    pub fn verify_mutual_unbiasedness(&self) -> UnbiasednessReport {
        let target = 1.0 / D as f64;
        let mut report = UnbiasednessReport { max_deviation: 0.0, worst: None };
        for (ia, a) in self.bases.iter().enumerate() {
            for b in &self.bases[ia + 1..] {
                let overlap = a.matrix.adjoint().matmul(&b.matrix);
                for i in 0..D {
                    for j in 0..D {
                        let dev = (overlap.entry(i, j).norm_sqr() - target).abs();
                        if report.worst.is_none() || dev > report.max_deviation {
                            report.max_deviation = dev;
                            report.worst = Some((a.label, b.label, i, j));
                        }
                    }
                }
            }
        }
        report
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnbiasednessReport {
    pub max_deviation: f64,
    /// (basis, basis, row eigenstate, column eigenstate) attaining the maximum.
    pub worst: Option<(BasisLabel, BasisLabel, usize, usize)>,
}

impl UnbiasednessReport {
    pub fn passed(&self) -> bool {
        self.max_deviation <= tolerance::UNBIASEDNESS
    }
}

/// U = diag(1, ω, ω⁴, ω⁴, ω), i.e. U_jj = ω^{j²}.
pub fn phase_unitary() -> UnitaryMatrix<5> {
    let diag = std::array::from_fn(|j| root_of_unity(5, (j * j) as i64));
    UnitaryMatrix::diagonal(diag).expect("roots of unity are unimodular")
}

/// The d-dimensional Fourier matrix Φ_jk = ω^{jk}/√d.
pub fn fourier<const D: usize>() -> UnitaryMatrix<D> {
    hadamard_from_exponents::<D>(D, |i, j| ((i * j) % D) as u8)
}

/// Power n_T with T = U^{n_T}·B for the d = 5 catalog; `None` for the
/// computational basis A.
pub fn generator_power(label: BasisLabel) -> Option<u8> {
    match label {
        BasisLabel::A => None,
        BasisLabel::B => Some(0),
        BasisLabel::C => Some(1),
        BasisLabel::E => Some(2),
        BasisLabel::D => Some(3),
        BasisLabel::F => Some(4),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationCheck {
    pub basis: BasisLabel,
    pub power: u8,
    pub max_error: f64,
    /// Entry (row, column) with the largest error.
    pub worst_entry: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneratingReport {
    pub relations: Vec<RelationCheck>,
    /// max |U⁵ − I|
    pub period_error: f64,
    /// max |Φ − B|
    pub fourier_error: f64,
}

impl GeneratingReport {
    pub fn passed(&self) -> bool {
        let tol = tolerance::GENERATING_RELATION;
        self.relations.iter().all(|r| r.max_error <= tol) && self.period_error <= tol && self.fourier_error <= tol
    }

    pub fn violations(&self) -> Vec<&RelationCheck> {
        self.relations.iter().filter(|r| r.max_error > tolerance::GENERATING_RELATION).collect()
    }
}

impl MubSet<5> {
    /// Checks C = U·B, E = U²·B, D = U³·B, F = U⁴·B columnwise, U⁵ = I and
    /// Φ = B.
    pub fn verify_generating_relations(&self) -> Result<GeneratingReport> {
        let u = phase_unitary();
        let b = self.basis(BasisLabel::B)?.matrix;
        let mut relations = Vec::new();
        for label in [BasisLabel::C, BasisLabel::E, BasisLabel::D, BasisLabel::F] {
            let power = generator_power(label).expect("non-computational basis");
            let predicted = u.pow(power as i64).matmul(&b);
            let actual = self.basis(label)?.matrix;
            let mut max_error = 0.0;
            let mut worst_entry = (0, 0);
            for i in 0..5 {
                for j in 0..5 {
                    let e = (predicted.entry(i, j) - actual.entry(i, j)).norm();
                    if e > max_error {
                        max_error = e;
                        worst_entry = (i, j);
                    }
                }
            }
            relations.push(RelationCheck { basis: label, power, max_error, worst_entry });
        }
        Ok(GeneratingReport {
            relations,
            period_error: u.pow(5).max_abs_diff(&UnitaryMatrix::identity()),
            fourier_error: fourier::<5>().max_abs_diff(&b),
        })
    }
}
