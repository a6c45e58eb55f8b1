//! Input auto-detection. `S{` starts a descriptor. A string made only of bytes
//! `?`..`~` is graph6; certificate text always contains a digit or a
//! parenthesis, which graph6 never does. Everything else is parsed as a
//! certificate.

use std::str::FromStr;

use anyhow::{Context, Error};
use lapint::{decode_graph6, ConstructionExpr, Graph, SetDescriptor};

#[derive(Debug)]
pub enum Input {
    Descriptor(SetDescriptor),
    Graph6(Graph),
    Certificate(ConstructionExpr),
}

impl FromStr for Input {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.starts_with("S{") {
            return Ok(Input::Descriptor(s.parse().with_context(|| format!("cannot parse descriptor {s:?}"))?));
        }
        if !s.is_empty() && s.bytes().all(|b| (63..=126).contains(&b)) {
            return Ok(Input::Graph6(decode_graph6(s.as_bytes()).with_context(|| format!("cannot parse graph6 {s:?}"))?));
        }
        Ok(Input::Certificate(s.parse().with_context(|| format!("cannot parse certificate {s:?}"))?))
    }
}
