//! Versioned JSON documents: `{format_version, kind, payload}`.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cover::SparseCover;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::labeling::LabelingScheme;
use crate::oracle::PrunedOracle;
use crate::routing::RoutingScheme;

pub const FORMAT_VERSION: u32 = 1;

/// A structure that can be stored in a document.
pub trait Document: Serialize + DeserializeOwned {
    const KIND: &'static str;

    /// Consistency checks run after loading.
    fn check(&self) -> Result<()> {
        Ok(())
    }
}

impl Document for Graph {
    const KIND: &'static str = "graph";
}

impl Document for SparseCover {
    const KIND: &'static str = "cover";
}

impl Document for LabelingScheme {
    const KIND: &'static str = "labeling";

    fn check(&self) -> Result<()> {
        self.check_labels()
    }
}

impl Document for PrunedOracle {
    const KIND: &'static str = "oracle";

    fn check(&self) -> Result<()> {
        self.validate()
    }
}

impl Document for RoutingScheme {
    const KIND: &'static str = "routing";
}

#[derive(Serialize)]
struct Out<'a, T> {
    format_version: u32,
    kind: &'a str,
    payload: &'a T,
}

#[derive(Deserialize)]
struct Header {
    format_version: u32,
    kind: String,
}

#[derive(Deserialize)]
struct In<T> {
    payload: T,
}

pub fn to_json<T: Document>(x: &T) -> String {
    serde_json::to_string(&Out { format_version: FORMAT_VERSION, kind: T::KIND, payload: x })
        .expect("structures serialize")
}

pub fn from_json<T: Document>(text: &str) -> Result<T> {
    let header: Header = serde_json::from_str(text).map_err(|e| Error::Corrupted(e.to_string()))?;
    if header.format_version != FORMAT_VERSION {
        return Err(Error::VersionMismatch { found: header.format_version, expected: FORMAT_VERSION });
    }
    if header.kind != T::KIND {
        return Err(Error::Corrupted(format!("expected a {} document, found {}", T::KIND, header.kind)));
    }
    let doc: In<T> = serde_json::from_str(text).map_err(|e| Error::Corrupted(e.to_string()))?;
    doc.payload.check()?;
    Ok(doc.payload)
}

/// Kind recorded in a document, without decoding the payload.
pub fn document_kind(text: &str) -> Result<String> {
    let header: Header = serde_json::from_str(text).map_err(|e| Error::Corrupted(e.to_string()))?;
    Ok(header.kind)
}
