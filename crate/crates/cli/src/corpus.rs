//! A seeded corpus of complexes, maps, diagrams, extensions and filtrations,
//! written as pretty-printed JSON files.

use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use dercat_core::gen::Gen;
use dercat_core::json::{
    chain_map_from_json, chain_map_to_json, complex_from_json, complex_to_json, diagram_from_json, diagram_to_json,
    ext_from_json, ext_to_json, filtration_from_json, filtration_to_json,
};
use dercat_core::Error;

use crate::config::{CliError, RunConfig};
use crate::report::{digest, digest_bytes, error_witness, CheckRecord};

/// File names in the order they enter the digest.
pub const FILES: &[&str] = &["complexes.json", "maps.json", "diagrams.json", "extensions.json", "filtrations.json"];

pub struct Corpus {
    pub files: Vec<(&'static str, String)>,
}

impl Corpus {
    pub fn digest(&self) -> String {
        let mut bytes = Vec::new();
        for (name, text) in &self.files {
            bytes.extend_from_slice(name.as_bytes());
            bytes.push(0);
            bytes.extend_from_slice(text.as_bytes());
        }
        digest_bytes(&bytes)
    }

    pub fn write(&self, dir: &Path) -> Result<(), CliError> {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for (name, text) in &self.files {
            let path = dir.join(name);
            fs::write(&path, text).map_err(|e| CliError::io(&path, e))?;
        }
        Ok(())
    }
}

pub fn generate(config: &RunConfig) -> Corpus {
    let mut g = Gen::new(config.seed, config.ring, config.sizes);
    let complexes: Vec<Value> = (0..12).map(|_| complex_to_json(&g.complex())).collect();
    let maps: Vec<Value> = (0..8).map(|_| chain_map_to_json(&g.any_map())).collect();
    let mut diagrams: Vec<Value> = (0..3).map(|_| diagram_to_json(&g.delta_diagram(2))).collect();
    diagrams.extend((0..3).map(|_| diagram_to_json(&g.cocartesian_square())));
    let extensions: Vec<Value> = (0..6).map(|_| ext_to_json(&g.split_extension())).collect();
    let filtrations: Vec<Value> = (0..3).map(|i| filtration_to_json(&g.filtration(i + 1))).collect();
    let files = [complexes, maps, diagrams, extensions, filtrations]
        .into_iter()
        .zip(FILES)
        .map(|(items, name)| (*name, serde_json::to_string_pretty(&Value::Array(items)).expect("json") + "\n"))
        .collect();
    Corpus { files }
}

/// Re-validates every object of a corpus directory. Malformed JSON is an
/// input error; an object that parses but violates its invariants is a
/// failed check.
pub fn verify(dir: &Path) -> Result<Vec<CheckRecord>, CliError> {
    let mut out = Vec::new();
    for name in FILES {
        let path = dir.join(name);
        let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
        let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Input(Error::Parse(format!("{name}: {e}"))))?;
        let items = v.as_array().ok_or_else(|| CliError::Input(Error::Parse(format!("{name}: expected an array"))))?;
        let kind = name.trim_end_matches(".json");
        for (i, item) in items.iter().enumerate() {
            let result = match kind {
                "complexes" => complex_from_json(item).map(|_| ()),
                "maps" => chain_map_from_json(item).map(|_| ()),
                "diagrams" => diagram_from_json(item).map(|_| ()),
                "extensions" => ext_from_json(item).map(|_| ()),
                _ => filtration_from_json(item).map(|_| ()),
            };
            let inputs = digest(item);
            match result {
                Ok(()) => out.push(CheckRecord { check: format!("corpus/{kind}/{i:03}"), inputs, pass: true, witness: None }),
                Err(e @ Error::Parse(_)) => return Err(CliError::Input(Error::Parse(format!("{name}[{i}]: {e}")))),
                Err(e) => out.push(CheckRecord {
                    check: format!("corpus/{kind}/{i:03}"),
                    inputs,
                    pass: false,
                    witness: Some(error_witness(&e)),
                }),
            }
        }
    }
    Ok(out)
}

/// Summary printed by `gen`.
pub fn summary(corpus: &Corpus, dir: &Path) -> Value {
    json!({
        "dir": dir.display().to_string(),
        "files": corpus.files.iter().map(|(n, _)| *n).collect::<Vec<_>>(),
        "digest": corpus.digest(),
    })
}
