use std::collections::HashMap;
use std::fmt::Write as _;

use super::{MsscError, MsscInstance};

/// Parses the line-oriented hypergraph format.
///
/// Each data line is `weight v1 v2 ...` with whitespace-separated vertex
/// labels. An optional `vertices: l1 l2 ...` line before the first hyperedge
/// fixes the vertex order and may name vertices in no hyperedge; otherwise
/// vertices are numbered by first appearance. `#` starts a comment.
pub fn parse_hypergraph(text: &str) -> Result<MsscInstance, MsscError> {
    let mut labels: Vec<String> = Vec::new();
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut declared = false;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: String| MsscError::Parse {
            line: line_no,
            message,
        };
        if let Some(rest) = line.strip_prefix("vertices:") {
            if declared || !edges.is_empty() {
                return Err(parse_err(
                    "`vertices:` must come once, before any hyperedge".into(),
                ));
            }
            declared = true;
            for label in rest.split_whitespace() {
                if ids.insert(label.to_string(), labels.len()).is_some() {
                    return Err(parse_err(format!("vertex `{label}` declared twice")));
                }
                labels.push(label.to_string());
            }
            continue;
        }
        let mut tokens = line.split_whitespace();
        let weight_token = tokens.next().expect("line is non-empty");
        let weight: f64 = weight_token
            .parse()
            .map_err(|_| parse_err(format!("`{weight_token}` is not a number")))?;
        let mut vertices = Vec::new();
        for label in tokens {
            let id = match ids.get(label) {
                Some(&id) => id,
                None if declared => return Err(parse_err(format!("undeclared vertex `{label}`"))),
                None => {
                    ids.insert(label.to_string(), labels.len());
                    labels.push(label.to_string());
                    labels.len() - 1
                }
            };
            vertices.push(id);
        }
        if vertices.is_empty() {
            return Err(parse_err("hyperedge has no vertices".into()));
        }
        edges.push((vertices, weight));
    }
    if labels.is_empty() {
        return Err(MsscError::EmptyInstance);
    }
    MsscInstance::with_labels(labels, edges)
}

/// Writes `inst` in the format read by [`parse_hypergraph`].
pub fn write_hypergraph(inst: &MsscInstance) -> String {
    let mut out = String::from("vertices:");
    for l in inst.labels() {
        out.push(' ');
        out.push_str(l);
    }
    out.push('\n');
    for e in inst.edges() {
        write!(out, "{}", e.weight).expect("writing to a String");
        for &v in &e.vertices {
            out.push(' ');
            out.push_str(inst.label(v));
        }
        out.push('\n');
    }
    out
}
