//! `K₀` classes of bounded free complexes as Euler characteristics.

use std::collections::BTreeMap;

use crate::complex::{is_quasi_iso, tensor, ChainMap, Complex};
use crate::sconst::{ext_q, ext_s, ext_split, ext_t, ExtObject};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct K0Class(pub i64);

pub fn k0_complex(a: &Complex) -> K0Class {
    K0Class(a.euler_characteristic())
}

/// One named check of an additivity run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K0Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// `(s, q) : K₀(extensions) -> K₀ × K₀` on the sampled extensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditivityReport {
    pub checks: Vec<K0Check>,
}

impl AdditivityReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Checks `χ(C) = χ(A) + χ(B)` on every sample, that every sampled target
/// pair has a split preimage with the same class, and that the class of a
/// sample is determined by its pair.
///
/// A failure of the first check aborts with the counterexample.
pub fn additivity_k0(samples: &[ExtObject]) -> Result<AdditivityReport> {
    let mut checks = Vec::new();
    let mut by_pair: BTreeMap<(i64, i64), i64> = BTreeMap::new();
    for (i, e) in samples.iter().enumerate() {
        let (a, c, b) = (k0_complex(ext_s(e)).0, k0_complex(ext_t(e)).0, k0_complex(ext_q(e)).0);
        if c != a + b {
            return Err(Error::Hypothesis {
                degree: 0,
                what: format!("sample {i}: chi(total) = {c} but chi(sub) + chi(quotient) = {}", a + b),
            });
        }
        checks.push(K0Check { name: format!("additive/{i:03}"), pass: true, detail: format!("{a} + {b} = {c}") });
        match by_pair.get(&(a, b)) {
            Some(&seen) => checks.push(K0Check {
                name: format!("injective/{i:03}"),
                pass: seen == c,
                detail: format!("pair ({a}, {b}) has classes {seen} and {c}"),
            }),
            None => {
                by_pair.insert((a, b), c);
            }
        }
    }
    for (i, e) in samples.iter().enumerate() {
        let split = ext_split(ext_s(e), ext_q(e))?;
        let pair = (k0_complex(ext_s(&split)).0, k0_complex(ext_q(&split)).0);
        let target = (k0_complex(ext_s(e)).0, k0_complex(ext_q(e)).0);
        let total = k0_complex(ext_t(&split)).0;
        checks.push(K0Check {
            name: format!("surjective/{i:03}"),
            pass: pair == target && total == by_pair[&target],
            detail: format!("split preimage of {target:?} has total {total}"),
        });
    }
    Ok(AdditivityReport { checks })
}

/// `(χ(a ⊗ b), χ(a) χ(b))`.
pub fn pairing_k0(a: &Complex, b: &Complex) -> Result<(i64, i64)> {
    let t = tensor(a, b)?;
    Ok((k0_complex(&t).0, k0_complex(a).0 * k0_complex(b).0))
}

/// Whether `is_quasi_iso(f)` implies `χ(src) = χ(dst)` for this `f`.
pub fn k0_quasi_iso_invariance(f: &ChainMap) -> bool {
    !is_quasi_iso(f) || k0_complex(f.src()) == k0_complex(f.dst())
}
