//! Built-in or user-supplied MUB catalogs.

use std::path::Path;

use mublab_core::mub::{GeneratingReport, UnbiasednessReport};
use mublab_core::record::MatrixRecord;
use mublab_core::tolerance;
use mublab_core::{Basis, BasisLabel, MubSet};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisRecord {
    pub label: BasisLabel,
    /// Columns are the eigenstates.
    pub matrix: MatrixRecord,
}

/// The `dump-mubs` payload; also the accepted `--catalog` format, bare or
/// inside an envelope.
#[derive(Clone, Debug, Serialize)]
pub struct CatalogPayload {
    pub dim: usize,
    pub bases: Vec<BasisRecord>,
    pub unbiasedness: UnbiasednessReport,
    pub generating_relations: Option<GeneratingReport>,
}

#[derive(Deserialize)]
struct CatalogFile {
    dim: usize,
    bases: Vec<BasisRecord>,
}

pub fn records<const D: usize>(set: &MubSet<D>) -> Vec<BasisRecord> {
    set.bases()
        .iter()
        .map(|b| BasisRecord { label: b.label, matrix: MatrixRecord::from(&b.matrix) })
        .collect()
}

fn read_catalog(path: &Path) -> Result<CatalogFile, CliError> {
    let read_err = |reason: String| CliError::Read { path: path.to_path_buf(), reason };
    let text = std::fs::read_to_string(path).map_err(|e| read_err(e.to_string()))?;
    let mut value: serde_json::Value = serde_json::from_str(&text).map_err(|e| read_err(e.to_string()))?;
    if let Some(inner) = value.get_mut("payload") {
        value = inner.take();
    }
    serde_json::from_value(value).map_err(|e| read_err(format!("not a catalog: {e}")))
}

fn build<const D: usize>(file: CatalogFile) -> Result<MubSet<D>, CliError> {
    if file.dim != D {
        return Err(CliError::Usage(format!("catalog has dimension {}, run uses {D}", file.dim)));
    }
    let mut bases = Vec::with_capacity(file.bases.len());
    for r in file.bases {
        let matrix = r.matrix.to_unitary::<D>().map_err(|e| CliError::Catalog(format!("basis {}: {e}", r.label)))?;
        bases.push(Basis::new(r.label, matrix).map_err(|e| CliError::Catalog(e.to_string()))?);
    }
    let set = MubSet::from_bases(bases).map_err(|e| CliError::Catalog(e.to_string()))?;
    let report = set.verify_mutual_unbiasedness();
    if !report.passed() {
        let pair = report.worst.map(|(a, b, i, j)| format!(" at {a}{i}/{b}{j}")).unwrap_or_default();
        return Err(CliError::Catalog(format!(
            "bases are not mutually unbiased: max deviation {:e}{pair} exceeds {:e}",
            report.max_deviation,
            tolerance::UNBIASEDNESS
        )));
    }
    Ok(set)
}

/// The configured catalog, validated.
pub fn load<const D: usize>(cfg: &RunConfig) -> Result<MubSet<D>, CliError> {
    match &cfg.catalog {
        None => Ok(MubSet::standard()?),
        Some(path) => build(read_catalog(path)?),
    }
}

pub fn payload<const D: usize>(set: &MubSet<D>) -> Result<CatalogPayload, CliError> {
    let generating_relations = if D == 5 {
        let lifted = MubSet::<5>::from_bases(
            set.bases()
                .iter()
                .map(|b| {
                    let rec = MatrixRecord::from(&b.matrix);
                    Basis::new(b.label, rec.to_unitary::<5>()?)
                })
                .collect::<mublab_core::Result<Vec<_>>>()?,
        )?;
        Some(lifted.verify_generating_relations()?)
    } else {
        None
    };
    Ok(CatalogPayload {
        dim: D,
        bases: records(set),
        unbiasedness: set.verify_mutual_unbiasedness(),
        generating_relations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file_of<const D: usize>(set: &MubSet<D>) -> CatalogFile {
        CatalogFile { dim: D, bases: records(set) }
    }

    #[test]
    fn standard_catalog_round_trips() {
        let set = MubSet::<5>::standard().unwrap();
        assert_eq!(build::<5>(file_of(&set)).unwrap(), set);
        let set4 = MubSet::<4>::standard().unwrap();
        assert_eq!(build::<4>(file_of(&set4)).unwrap(), set4);
    }

    #[test]
    fn flipped_phase_is_rejected() {
        let set = MubSet::<5>::standard().unwrap();
        let mut f = file_of(&set);
        let z = &mut f.bases[3].matrix.rows[1][2];
        z.re = -z.re;
        z.im = -z.im;
        assert!(matches!(build::<5>(f), Err(CliError::Catalog(_))));
    }

    #[test]
    fn biased_but_unitary_is_rejected() {
        // A copy of A in B's slot is unitary but not unbiased with A.
        let set = MubSet::<4>::standard().unwrap();
        let mut f = file_of(&set);
        f.bases[1].matrix = f.bases[0].matrix.clone();
        let err = build::<4>(f).unwrap_err();
        assert!(err.to_string().contains("not mutually unbiased"), "{err}");
    }

    #[test]
    fn wrong_dimension_is_usage() {
        let set = MubSet::<4>::standard().unwrap();
        assert!(matches!(build::<5>(file_of(&set)), Err(CliError::Usage(_))));
    }
}
