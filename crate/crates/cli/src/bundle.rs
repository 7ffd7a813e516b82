//! On-disk code bundles: two q-ary alist files plus `meta.json`, and for
//! generic lifts the binary skeleton they came from.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use extoric::io::{read_binary_alists, read_qary_alist, qary_alist_field_size, write_binary_alist, write_qary_alist};
use extoric::lift::{BinaryCssPair, CssPairQ};
use extoric::qmatrix::SparseQMatrix;
use extoric::toric::{ExtendedToricCode, ToricLayout};
use extoric::verify::Construction;
use extoric::Field;

use crate::Failure;

pub const HX_FILE: &str = "hx.alist";
pub const HZ_FILE: &str = "hz.alist";
pub const META_FILE: &str = "meta.json";
pub const SKELETON_FILE: &str = "skeleton.alist";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionKind {
    ExtendedToric,
    LiftedGeneric,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    /// Toric size; absent for generic lifts.
    pub n: Option<usize>,
    pub m: u32,
    pub seed: u64,
    pub poly: u32,
    pub construction: ConstructionKind,
}

/// Matrices as read from disk, not yet validated.
pub struct Bundle {
    pub meta: Meta,
    pub hxq: SparseQMatrix,
    pub hzq: SparseQMatrix,
    pub skeleton: Option<BinaryCssPair>,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::io(path, e))
}

/// Two stacked binary alist blocks, `H_X` first.
pub fn read_skeleton(path: &Path) -> Result<BinaryCssPair, Failure> {
    let mut blocks = read_binary_alists(&read(path)?)?;
    if blocks.len() != 2 {
        return Err(Failure::parse(format!("{}: expected 2 alist blocks, found {}", path.display(), blocks.len())));
    }
    let hz = blocks.pop().expect("two blocks");
    let hx = blocks.pop().expect("two blocks");
    Ok(BinaryCssPair::new(hx, hz)?)
}

pub fn skeleton_text(s: &BinaryCssPair) -> Result<String, Failure> {
    Ok(write_binary_alist(s.hx())? + &write_binary_alist(s.hz())?)
}

impl Bundle {
    pub fn from_pair(pair: &CssPairQ, n: Option<usize>, construction: ConstructionKind) -> Self {
        let f = pair.field();
        Bundle {
            meta: Meta { n, m: f.m(), seed: pair.seed(), poly: f.poly(), construction },
            hxq: pair.hxq().clone(),
            hzq: pair.hzq().clone(),
            skeleton: (construction == ConstructionKind::LiftedGeneric).then(|| pair.skeleton().clone()),
        }
    }

    pub fn save(&self, dir: &Path) -> Result<(), Failure> {
        fs::create_dir_all(dir).map_err(|e| Failure::io(dir, e))?;
        write(&dir.join(HX_FILE), &write_qary_alist(&self.hxq))?;
        write(&dir.join(HZ_FILE), &write_qary_alist(&self.hzq))?;
        if let Some(s) = &self.skeleton {
            write(&dir.join(SKELETON_FILE), &skeleton_text(s)?)?;
        }
        let meta = serde_json::to_string_pretty(&self.meta).expect("metadata serializes") + "\n";
        write(&dir.join(META_FILE), &meta)
    }

    pub fn load(dir: &Path) -> Result<Self, Failure> {
        let meta_path = dir.join(META_FILE);
        let meta: Meta = serde_json::from_str(&read(&meta_path)?)
            .map_err(|e| Failure::parse(format!("{}: {e}", meta_path.display())))?;
        let field = Arc::new(Field::with_poly(meta.m, meta.poly)?);
        let load_matrix = |name: &str| -> Result<SparseQMatrix, Failure> {
            let path: PathBuf = dir.join(name);
            let text = read(&path)?;
            let q = qary_alist_field_size(&text)?;
            if q != field.q() {
                return Err(Failure::parse(format!("{}: field size {q}, metadata says {}", path.display(), field.q())));
            }
            Ok(read_qary_alist(&text, field.clone())?)
        };
        let hxq = load_matrix(HX_FILE)?;
        let hzq = load_matrix(HZ_FILE)?;
        let skeleton = match meta.construction {
            ConstructionKind::LiftedGeneric if dir.join(SKELETON_FILE).exists() => {
                Some(read_skeleton(&dir.join(SKELETON_FILE))?)
            }
            _ => None,
        };
        if meta.construction == ConstructionKind::ExtendedToric && meta.n.is_none() {
            return Err(Failure::parse(format!("{}: extended-toric bundle without n", meta_path.display())));
        }
        Ok(Bundle { meta, hxq, hzq, skeleton })
    }

    pub fn construction(&self) -> Construction {
        match self.meta.construction {
            ConstructionKind::ExtendedToric => Construction::ExtendedToric { n: self.meta.n.unwrap_or(0) },
            ConstructionKind::LiftedGeneric => Construction::LiftedGeneric { skeleton: self.skeleton.clone() },
        }
    }

    /// Validated pair; fails on the first broken invariant.
    pub fn pair(&self) -> Result<CssPairQ, Failure> {
        Ok(CssPairQ::from_matrices(self.hxq.clone(), self.hzq.clone(), self.meta.seed)?)
    }

    pub fn toric_code(&self) -> Result<ExtendedToricCode, Failure> {
        let Some(n) = self.meta.n.filter(|_| self.meta.construction == ConstructionKind::ExtendedToric) else {
            return Err(Failure::param("this command needs an extended-toric bundle".into()));
        };
        Ok(ExtendedToricCode::from_pair(ToricLayout::new(n)?, self.pair()?)?)
    }
}
