//! Reading workspace files into named documents with positioned diagnostics.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::value::RawValue;

use crate::doc::{self, Document, KINDS};
use crate::CliError;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct File<'a> {
    #[serde(rename = "$schema")]
    _schema: Option<String>,
    #[serde(borrow)]
    documents: BTreeMap<String, &'a RawValue>,
}

#[derive(Deserialize)]
struct Kind {
    kind: String,
}

#[derive(Debug, Clone)]
pub struct Entry {
    pub doc: Document,
    pub file: String,
    pub line: usize,
}

fn position(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = offset - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

fn schema_error(file: &str, base: (usize, usize), path: String, err: &serde_json::Error) -> CliError {
    let (l, c) = (err.line().max(1), err.column().max(1));
    let (line, column) = if l == 1 { (base.0, base.1 + c - 1) } else { (base.0 + l - 1, c) };
    let message = err.to_string();
    let message = match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message,
    };
    CliError::Schema { file: file.to_string(), line, column, path, message }
}

fn parse<T: DeserializeOwned>(file: &str, text: &str, name: &str, raw: &RawValue) -> Result<T, CliError> {
    let offset = raw.get().as_ptr() as usize - text.as_ptr() as usize;
    let base = position(text, offset);
    let mut de = serde_json::Deserializer::from_str(raw.get());
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let inner = e.path().to_string();
        let path = if inner == "." { format!("documents.{name}") } else { format!("documents.{name}.{inner}") };
        schema_error(file, base, path, e.inner())
    })
}

fn document(file: &str, text: &str, name: &str, raw: &RawValue) -> Result<Document, CliError> {
    let kind: Kind = parse(file, text, name, raw)?;
    let (f, t, n, r) = (file, text, name, raw);
    Ok(match kind.kind.as_str() {
        "category" => Document::Category(parse::<doc::Category>(f, t, n, r)?),
        "partition" => Document::Partition(parse(f, t, n, r)?),
        "zobject" => Document::ZObject(parse(f, t, n, r)?),
        "zmorphism" => Document::ZMorphism(parse(f, t, n, r)?),
        "covering" => Document::Covering(parse(f, t, n, r)?),
        "pointed" => Document::Pointed(parse(f, t, n, r)?),
        "presheaf" => Document::Presheaf(parse(f, t, n, r)?),
        "model" => Document::Model(parse(f, t, n, r)?),
        "functor" => Document::Functor(parse(f, t, n, r)?),
        "fingerprints" => Document::Fingerprints(parse(f, t, n, r)?),
        "layered" => Document::Layered(parse(f, t, n, r)?),
        "z_compose" => Document::ZCompose(parse(f, t, n, r)?),
        "topology" => Document::Topology(parse(f, t, n, r)?),
        "nisnevich" => Document::Nisnevich(parse(f, t, n, r)?),
        "square" => Document::Square(parse(f, t, n, r)?),
        "powered" => Document::Powered(parse(f, t, n, r)?),
        "gamma" => Document::Gamma(parse(f, t, n, r)?),
        "blurry" => Document::Blurry(parse(f, t, n, r)?),
        "powered_blurry" => Document::PoweredBlurry(parse(f, t, n, r)?),
        "sheaf" => Document::Sheaf(parse(f, t, n, r)?),
        "additivity" => Document::Additivity(parse(f, t, n, r)?),
        "squares_probe" => Document::SquaresProbe(parse(f, t, n, r)?),
        "parametrize" => Document::Parametrize(parse(f, t, n, r)?),
        "model_check" => Document::ModelCheck(parse(f, t, n, r)?),
        "equivalence" => Document::Equivalence(parse(f, t, n, r)?),
        other => {
            let offset = raw.get().as_ptr() as usize - text.as_ptr() as usize;
            let (line, column) = position(text, offset);
            return Err(CliError::Schema {
                file: file.to_string(),
                line,
                column,
                path: format!("documents.{name}.kind"),
                message: format!("unknown kind `{other}`, expected one of {}", KINDS.join(", ")),
            });
        }
    })
}

/// Parse one workspace file's text.
pub fn parse_workspace(file: &str, text: &str) -> Result<BTreeMap<String, Entry>, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let parsed: File = serde_path_to_error::deserialize(&mut de)
        .map_err(|e| schema_error(file, (1, 1), e.path().to_string(), e.inner()))?;
    let mut out = BTreeMap::new();
    for (name, raw) in parsed.documents {
        let doc = document(file, text, &name, raw)?;
        let offset = raw.get().as_ptr() as usize - text.as_ptr() as usize;
        out.insert(name, Entry { doc, file: file.to_string(), line: position(text, offset).0 });
    }
    Ok(out)
}

/// Read and merge workspace files; a name may be defined only once.
pub fn load(paths: &[impl AsRef<Path>]) -> Result<BTreeMap<String, Entry>, CliError> {
    let mut all: BTreeMap<String, Entry> = BTreeMap::new();
    for p in paths {
        let p = p.as_ref();
        let file = p.display().to_string();
        let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{file}: {e}")))?;
        for (name, entry) in parse_workspace(&file, &text)? {
            if let Some(prev) = all.get(&name) {
                return Err(CliError::Resolve {
                    doc: name.clone(),
                    message: format!("defined in both {}:{} and {}:{}", prev.file, prev.line, entry.file, entry.line),
                });
            }
            all.insert(name, entry);
        }
    }
    Ok(all)
}
