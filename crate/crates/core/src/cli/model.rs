//! Line-oriented model files.
//!
//! ```text
//! # decay with a refill context
//! species A, B
//! init A = 1.0
//! reaction A -> B @ 1.0
//! reaction 2A + B -> 0 @ 0.5
//! context Q { A = 1.0 }
//! context R {
//!   B = 0.2
//!   reaction B -> A @ 3.0
//! }
//! ```
//!
//! Every name must be declared by a `species` line (anywhere in the file).
//! A context runs on the model's reactions plus any it adds itself.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::ContextEnv;
use crate::procmodel::{Network, Process, Reaction, SpeciesIndex};

#[derive(Debug, Clone)]
pub struct Model {
    pub network: Arc<Network>,
    pub init: Process,
    pub contexts: BTreeMap<String, Arc<Process>>,
}

impl Model {
    pub fn load(path: &Path) -> Result<Model> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            msg: e.to_string(),
        })?;
        Model::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Model> {
        let lines = logical_lines(text)?;
        let mut names = Vec::new();
        for (no, line) in &lines {
            if let Some(rest) = keyword(line, "species") {
                for name in rest.split(',').map(str::trim) {
                    if !is_ident(name) {
                        return Err(bad(*no, format!("invalid species name `{name}`")));
                    }
                    names.push(name.to_string());
                }
            }
        }
        let species = SpeciesIndex::new(names.iter()).map_err(|e| bad(0, e.to_string()))?;

        let mut reactions = Vec::new();
        let mut init = vec![0.0; species.len()];
        let mut raw_contexts: Vec<(usize, String, &str)> = Vec::new();
        for (no, line) in &lines {
            let no = *no;
            if keyword(line, "species").is_some() {
                continue;
            } else if let Some(rest) = keyword(line, "init") {
                for entry in rest.split(',') {
                    let (i, v) = assignment(no, entry, &species)?;
                    init[i] = v;
                }
            } else if let Some(rest) = keyword(line, "reaction") {
                reactions.push(reaction(no, rest, &species)?);
            } else if let Some(rest) = keyword(line, "context") {
                let (name, body) = rest
                    .split_once('{')
                    .ok_or_else(|| bad(no, "expected `{` after context name"))?;
                let name = name.trim();
                if !is_ident(name) {
                    return Err(bad(no, format!("invalid context name `{name}`")));
                }
                let body = body
                    .trim_end()
                    .strip_suffix('}')
                    .ok_or_else(|| bad(no, "unterminated context block"))?;
                if raw_contexts.iter().any(|c| c.1 == name) {
                    return Err(bad(no, format!("duplicate context `{name}`")));
                }
                raw_contexts.push((no, name.to_string(), body));
            } else {
                return Err(bad(no, format!("unrecognized line `{line}`")));
            }
        }

        let network = Arc::new(
            Network::new(species.clone(), reactions.clone()).map_err(|e| bad(0, e.to_string()))?,
        );
        let init = Process::new(network.clone(), init).map_err(|e| bad(0, e.to_string()))?;

        let mut contexts = BTreeMap::new();
        for (no, name, body) in raw_contexts {
            let mut conc = vec![0.0; species.len()];
            let mut extra = Vec::new();
            for item in body.lines().flat_map(|l| split_items(l)) {
                if let Some(rest) = keyword(item, "reaction") {
                    extra.push(reaction(no, rest, &species)?);
                } else {
                    let (i, v) = assignment(no, item, &species)?;
                    conc[i] = v;
                }
            }
            let net = if extra.is_empty() {
                network.clone()
            } else {
                let all = reactions.iter().cloned().chain(extra).collect();
                Arc::new(Network::new(species.clone(), all).map_err(|e| bad(no, e.to_string()))?)
            };
            let q = Process::new(net, conc).map_err(|e| bad(no, e.to_string()))?;
            contexts.insert(name, Arc::new(q));
        }
        Ok(Model {
            network,
            init,
            contexts,
        })
    }

    /// Names a formula may refer to.
    pub fn env(&self) -> ContextEnv {
        let mut env = ContextEnv::with_species(self.network.species().names());
        for (name, q) in &self.contexts {
            env.add_context(name.clone(), q.clone());
        }
        env
    }
}

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::ModelFile {
        line,
        msg: msg.into(),
    }
}

/// Non-blank lines with comments stripped; a context block spanning several
/// lines is joined into one, keeping its line breaks.
fn logical_lines(text: &str) -> Result<Vec<(usize, String)>> {
    let mut out: Vec<(usize, String)> = Vec::new();
    let mut open: Option<(usize, String)> = None;
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((start, mut acc)) = open.take() {
            acc.push('\n');
            acc.push_str(line);
            if line.contains('}') {
                out.push((start, acc));
            } else {
                open = Some((start, acc));
            }
        } else if keyword(line, "context").is_some() && line.contains('{') && !line.contains('}') {
            open = Some((no, line.to_string()));
        } else {
            out.push((no, line.to_string()));
        }
    }
    if let Some((start, _)) = open {
        return Err(bad(start, "unterminated context block"));
    }
    Ok(out)
}

fn split_items(line: &str) -> Vec<&str> {
    let line = line.trim();
    if line.is_empty() {
        Vec::new()
    } else if keyword(line, "reaction").is_some() {
        vec![line]
    } else {
        line.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect()
    }
}

fn keyword<'a>(line: &'a str, kw: &str) -> Option<&'a str> {
    let rest = line.strip_prefix(kw)?;
    if rest.is_empty() || rest.starts_with(char::is_whitespace) {
        Some(rest.trim())
    } else {
        None
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_')
        && chars.all(|c| c.is_alphanumeric() || c == '_')
}

fn number(line: usize, s: &str) -> Result<f64> {
    let s = s.trim();
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| bad(line, format!("expected a number, found `{s}`")))
}

fn species_at(line: usize, name: &str, species: &SpeciesIndex) -> Result<usize> {
    species
        .position(name)
        .ok_or_else(|| bad(line, format!("undeclared species `{name}`")))
}

/// `A = 1.5`
fn assignment(line: usize, s: &str, species: &SpeciesIndex) -> Result<(usize, f64)> {
    let (name, value) = s.split_once('=').ok_or_else(|| {
        bad(
            line,
            format!("expected `species = value`, found `{}`", s.trim()),
        )
    })?;
    Ok((
        species_at(line, name.trim(), species)?,
        number(line, value)?,
    ))
}

/// `2A + B -> C @ 1.0`
fn reaction(line: usize, s: &str, species: &SpeciesIndex) -> Result<Reaction> {
    let (lhs, rest) = s
        .split_once("->")
        .ok_or_else(|| bad(line, "expected `->` in reaction"))?;
    let (rhs, rate) = rest
        .split_once('@')
        .ok_or_else(|| bad(line, "expected `@ rate` in reaction"))?;
    let side = |text: &str| -> Result<Vec<(usize, u32)>> {
        let text = text.trim();
        if text.is_empty() || text == "0" || text == "∅" {
            return Ok(Vec::new());
        }
        text.split('+')
            .map(|term| {
                let term = term.trim();
                let split = term
                    .find(|c: char| !c.is_ascii_digit())
                    .unwrap_or(term.len());
                let (coef, name) = term.split_at(split);
                let coef = if coef.is_empty() {
                    1
                } else {
                    coef.parse::<u32>()
                        .map_err(|_| bad(line, format!("bad coefficient in `{term}`")))?
                };
                Ok((species_at(line, name.trim(), species)?, coef))
            })
            .collect()
    };
    Reaction::new(side(lhs)?, side(rhs)?, number(line, rate)?).map_err(|e| bad(line, e.to_string()))
}
