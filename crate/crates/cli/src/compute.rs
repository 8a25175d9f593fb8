//! One-off computations on JSON inputs.

use std::fs;
use std::path::PathBuf;

use serde_json::{json, Value};

use dercat_core::complex::{cone, homology};
use dercat_core::derived::derived_hom;
use dercat_core::json::{
    chain_map_from_json, complex_from_json, complex_to_json, derived_hom_to_json, filtration_from_json,
    homology_to_json, sn_to_json,
};
use dercat_core::k_theory::k0_complex;
use dercat_core::sconst::from_filtration;
use dercat_core::Error;

use crate::config::CliError;

pub const COMMANDS: &[&str] = &["homology", "k0", "derived-hom", "cone", "s-build"];

fn read(path: &PathBuf) -> Result<Value, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(Error::Parse(format!("{}: {e}", path.display()))))
}

pub fn compute(what: &str, inputs: &[PathBuf]) -> Result<Value, CliError> {
    let want = if what == "derived-hom" { 2 } else { 1 };
    if inputs.len() != want {
        return Err(CliError::Usage(format!("{what} takes {want} --input file(s), got {}", inputs.len())));
    }
    let first = read(&inputs[0])?;
    Ok(match what {
        "homology" => {
            let c = complex_from_json(&first)?;
            let groups: Vec<_> = (c.lo()..=c.hi()).map(|n| (n, homology(&c, n))).collect();
            homology_to_json(&groups)
        }
        "k0" => json!(k0_complex(&complex_from_json(&first)?).0),
        "derived-hom" => {
            let x = complex_from_json(&first)?;
            let y = complex_from_json(&read(&inputs[1])?)?;
            derived_hom_to_json(&derived_hom(&x, &y)?)
        }
        "cone" => complex_to_json(&cone(&chain_map_from_json(&first)?)),
        "s-build" => sn_to_json(&from_filtration(&filtration_from_json(&first)?)?),
        other => return Err(CliError::Usage(format!("unknown computation {other:?}; known: {}", COMMANDS.join(", ")))),
    })
}
