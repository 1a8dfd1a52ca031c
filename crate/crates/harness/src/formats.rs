//! JSON file formats for kernels, chaos elements and verification reports.
//!
//! Complex numbers are `[re, im]` pairs. Kernel entries are row-major with
//! the unbarred group first and the last index varying fastest.

use std::fs;
use std::path::Path;

use chaosforge_core::{ChaosElement, Complex64, KernelTensor};
use serde::{Deserialize, Serialize};

use crate::error::{io_err, HarnessError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelFile {
    pub d: usize,
    pub m: usize,
    pub n: usize,
    pub entries: Vec<[f64; 2]>,
}

impl KernelFile {
    pub fn from_kernel(k: &KernelTensor) -> Self {
        Self {
            d: k.dim(),
            m: k.m(),
            n: k.n(),
            entries: k.entries().iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    /// Validates length and finiteness through the core constructor.
    pub fn to_kernel(&self) -> Result<KernelTensor> {
        let entries = self
            .entries
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        Ok(KernelTensor::new(self.d, self.m, self.n, entries)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradeFile {
    pub m: usize,
    pub n: usize,
    pub kernel: KernelFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChaosFile {
    pub d: usize,
    pub grades: Vec<GradeFile>,
    pub constant: [f64; 2],
}

impl ChaosFile {
    pub fn from_element(f: &ChaosElement) -> Self {
        let c = f.constant_term();
        Self {
            d: f.dim(),
            grades: f
                .components()
                .map(|(g, k)| GradeFile {
                    m: g.m,
                    n: g.n,
                    kernel: KernelFile::from_kernel(k),
                })
                .collect(),
            constant: [c.re, c.im],
        }
    }

    pub fn to_element(&self) -> Result<ChaosElement> {
        let [re, im] = self.constant;
        let mut out = ChaosElement::constant(self.d, Complex64::new(re, im));
        for g in &self.grades {
            if (g.m, g.n) != (g.kernel.m, g.kernel.n) {
                return Err(HarnessError::Invalid(format!(
                    "grade ({},{}) holds a kernel of shape ({},{})",
                    g.m, g.n, g.kernel.m, g.kernel.n
                )));
            }
            out.add_kernel(&g.kernel.to_kernel()?, Complex64::new(1.0, 0.0))?;
        }
        Ok(out)
    }
}

/// Outcome of one identity check.
///
/// Complex-valued checks store real parts in `lhs`/`rhs`; their errors use
/// the complex modulus. `rel_err` is `abs_err / max(1, |rhs|)` unless the
/// case name says otherwise. A check that could not run carries NaN
/// values, written as JSON `null`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub case: String,
    pub m: usize,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
    #[serde(deserialize_with = "nan_if_null")]
    pub lhs: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub rhs: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub abs_err: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub rel_err: f64,
    pub pass: bool,
}

fn nan_if_null<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

pub fn read_kernel(path: &Path) -> Result<KernelTensor> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_kernel(&text)
}

pub fn parse_kernel(text: &str) -> Result<KernelTensor> {
    serde_json::from_str::<KernelFile>(text)?.to_kernel()
}

pub fn kernel_to_json(k: &KernelTensor) -> String {
    serde_json::to_string_pretty(&KernelFile::from_kernel(k)).expect("finite kernel serializes")
}

pub fn write_kernel(path: &Path, k: &KernelTensor) -> Result<()> {
    fs::write(path, kernel_to_json(k)).map_err(io_err(path))
}

/// A JSON array of kernel objects, as consumed by the `file` sweep family.
pub fn read_kernel_sequence(path: &Path) -> Result<Vec<KernelTensor>> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str::<Vec<KernelFile>>(&text)?
        .iter()
        .map(KernelFile::to_kernel)
        .collect()
}

pub fn read_chaos(path: &Path) -> Result<ChaosElement> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str::<ChaosFile>(&text)?.to_element()
}

pub fn write_chaos(path: &Path, f: &ChaosElement) -> Result<()> {
    let text = serde_json::to_string_pretty(&ChaosFile::from_element(f))
        .expect("finite element serializes");
    fs::write(path, text).map_err(io_err(path))
}
