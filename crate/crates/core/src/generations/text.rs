//! G-structure text format: `model: NAME` blocks in the model format,
//! followed or interleaved by `gen-edge: LOWER UPPER` lines.

use super::{tree_error, GStructure, GenError, GenErrorKind, Member};
use crate::kripke::{strip_comment, KripkeModel, RawModel};
use crate::tree::Tree;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawGStructure {
    pub members: Vec<(String, RawModel, Option<usize>)>,
    pub edges: Vec<(String, String, Option<usize>)>,
}

fn syntax(line: usize, msg: impl Into<String>) -> GenError {
    GenError {
        line: Some(line),
        kind: GenErrorKind::Syntax(msg.into()),
    }
}

impl RawGStructure {
    pub fn parse(text: &str) -> Result<Self, GenError> {
        let mut raw = RawGStructure::default();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let body = strip_comment(line);
            if body.is_empty() {
                continue;
            }
            if let Some(rest) = body.strip_prefix("model:") {
                let name = rest.trim();
                if name.is_empty() || name.contains(char::is_whitespace) {
                    return Err(syntax(line_no, "`model:` takes one name"));
                }
                raw.members
                    .push((name.to_owned(), RawModel::default(), Some(line_no)));
            } else if let Some(rest) = body.strip_prefix("gen-edge:") {
                let words: Vec<&str> = rest.split_whitespace().collect();
                let [a, b] = words[..] else {
                    return Err(syntax(line_no, "`gen-edge:` takes two member names"));
                };
                raw.edges.push((a.to_owned(), b.to_owned(), Some(line_no)));
            } else {
                let Some((name, model, _)) = raw.members.last_mut() else {
                    return Err(syntax(line_no, "model line before any `model:` header"));
                };
                let handled = model.parse_line(line_no, body).map_err(|error| GenError {
                    line: Some(line_no),
                    kind: GenErrorKind::MemberInvalid {
                        member: name.clone(),
                        error,
                    },
                })?;
                if !handled {
                    return Err(syntax(line_no, format!("unrecognised line `{body}`")));
                }
            }
        }
        Ok(raw)
    }

    pub fn build(&self) -> Result<GStructure, GenError> {
        let mut members = Vec::with_capacity(self.members.len());
        for (name, raw, line) in &self.members {
            let model = KripkeModel::validate(raw).map_err(|error| GenError {
                line: error.line.or(*line),
                kind: GenErrorKind::MemberInvalid {
                    member: name.clone(),
                    error,
                },
            })?;
            members.push(Member {
                name: name.clone(),
                model,
            });
        }
        let names: Vec<&str> = self.members.iter().map(|m| m.0.as_str()).collect();
        let edges: Vec<(&str, &str)> = self
            .edges
            .iter()
            .map(|(a, b, _)| (a.as_str(), b.as_str()))
            .collect();
        let order = Tree::new(&names, &edges).map_err(|e| {
            let mut err = tree_error(e);
            err.line = match &err.kind {
                GenErrorKind::UnknownMember(m) | GenErrorKind::NotATree { member: m, .. } => self
                    .edges
                    .iter()
                    .find(|(a, b, _)| a == m || b == m)
                    .and_then(|e| e.2),
                GenErrorKind::DuplicateMember(m) => self
                    .members
                    .iter()
                    .filter(|x| &x.0 == m)
                    .nth(1)
                    .and_then(|x| x.2),
                _ => None,
            };
            err
        })?;
        let mut edge_line = vec![None; members.len()];
        for (_, b, line) in &self.edges {
            if let Some(c) = order.index_of(b) {
                edge_line[c] = *line;
            }
        }
        GStructure::with_order(members, order, &edge_line)
    }
}

pub(super) fn write(g: &GStructure) -> String {
    let mut out = String::new();
    for m in g.members() {
        out.push_str(&format!("model: {}\n", m.name));
        out.push_str(&m.model.to_text());
    }
    let order = g.order();
    for &m in order.preorder() {
        for &c in order.children(m) {
            out.push_str(&format!("gen-edge: {} {}\n", order.name(m), order.name(c)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TEXT: &str = "model: w1\nnodes: r\nval: p\n\nmodel: w2   # adds a leaf\nnodes: r k\nedge: r k\nval: p k\ngen-edge: w1 w2\n";

    #[test]
    fn round_trip() {
        let g = GStructure::from_text(TEXT).unwrap();
        assert_eq!(GStructure::from_text(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn error_lines() {
        let bad = TEXT.replace("val: p k", "val: p r");
        let e = GStructure::from_text(&bad).unwrap_err();
        assert_eq!(e.line, Some(8));
        assert!(matches!(e.kind, GenErrorKind::MemberInvalid { .. }));
        let bad = TEXT
            .replace("nodes: r k", "nodes: s k")
            .replace("edge: r k", "edge: s k");
        let e = GStructure::from_text(&bad).unwrap_err();
        assert_eq!(e.line, Some(9));
        let e = GStructure::from_text("nodes: r\n").unwrap_err();
        assert_eq!(e.line, Some(1));
    }
}
