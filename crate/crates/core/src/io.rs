//! Reading and writing trees.
//!
//! Two text formats are supported:
//!
//! * JSON: `{"nodes":[{"id":0,"parent":null,"height":0.0,"label":"r"}, ...]}`.
//!   Heights make a merge tree; a `geometry` polyline on every node makes an
//!   embedded tree. The polyline of a non-root node runs from its parent's
//!   position to its own; the root's geometry is its single position.
//! * Extended Newick: ordinary nesting where `:h` gives the absolute height
//!   of the node, e.g. `((a:-3,b:-2):-1)root:0`.
//!
//! Parsing assigns dense ids in preorder, so serializing a parsed tree and
//! parsing it again yields the same tree.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::{EmbeddedTree, MergeTree, NodeId, Point2, RootedTree};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeFormat {
    Json,
    NewickExt,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParsedTree {
    Merge(MergeTree),
    Embedded(EmbeddedTree),
}

impl ParsedTree {
    pub fn into_merge(self) -> Result<MergeTree> {
        match self {
            ParsedTree::Merge(m) => Ok(m),
            ParsedTree::Embedded(_) => Err(Error::Structure("expected a merge tree (heights), got geometry".into())),
        }
    }

    pub fn into_embedded(self) -> Result<EmbeddedTree> {
        match self {
            ParsedTree::Embedded(e) => Ok(e),
            ParsedTree::Merge(_) => Err(Error::Structure("expected an embedded tree (geometry), got heights".into())),
        }
    }

    pub fn tree(&self) -> &RootedTree {
        match self {
            ParsedTree::Merge(m) => m.tree(),
            ParsedTree::Embedded(e) => e.tree(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonNode {
    id: i64,
    parent: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    height: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    geometry: Option<Vec<Point2>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonTree {
    nodes: Vec<JsonNode>,
}

pub fn parse_tree(text: &str, format: TreeFormat) -> Result<ParsedTree> {
    match format {
        TreeFormat::Json => parse_json(text),
        TreeFormat::NewickExt => parse_newick(text).map(ParsedTree::Merge),
    }
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let mut offset = 0;
    for (i, l) in text.split_inclusive('\n').enumerate() {
        if i + 1 == line {
            return offset + column.saturating_sub(1);
        }
        offset += l.len();
    }
    offset
}

/// Parses the node list and builds the tree structure in preorder ids.
fn json_structure(text: &str) -> Result<(JsonTree, RootedTree, Vec<NodeId>)> {
    let raw: JsonTree = serde_json::from_str(text).map_err(|e| Error::Syntax {
        pos: byte_offset(text, e.line(), e.column()),
        msg: e.to_string(),
    })?;
    if raw.nodes.is_empty() {
        return Err(Error::Structure("tree has no nodes".into()));
    }
    let mut index = HashMap::new();
    for (i, n) in raw.nodes.iter().enumerate() {
        if index.insert(n.id, i).is_some() {
            return Err(Error::Structure(format!("duplicate node id {}", n.id)));
        }
    }
    let k = raw.nodes.len();
    let mut parent = vec![None; k];
    let mut children = vec![Vec::new(); k];
    for (i, n) in raw.nodes.iter().enumerate() {
        if let Some(p) = n.parent {
            let &pi = index
                .get(&p)
                .ok_or_else(|| Error::Structure(format!("node {} names unknown parent {p}", n.id)))?;
            parent[i] = Some(pi);
            children[pi].push(i);
        }
    }
    let labels = raw.nodes.iter().map(|n| n.label.clone()).collect();
    let tree = RootedTree::from_parts(parent, children, labels)?;
    let (tree, new_id) = tree.canonical_order();
    Ok((raw, tree, new_id))
}

/// Reads only structure and labels; heights and geometry are ignored, so
/// plain labeled trees may omit them.
pub fn parse_labeled(text: &str, format: TreeFormat) -> Result<RootedTree> {
    match format {
        TreeFormat::Json => json_structure(text).map(|(_, t, _)| t),
        TreeFormat::NewickExt => parse_newick(text).map(|m| m.tree().clone()),
    }
}

pub fn parse_json(text: &str) -> Result<ParsedTree> {
    let (raw, tree, new_id) = json_structure(text)?;
    let k = raw.nodes.len();
    let mut by_new: Vec<&JsonNode> = vec![&raw.nodes[0]; k];
    for (old, &new) in new_id.iter().enumerate() {
        by_new[new] = &raw.nodes[old];
    }

    let with_geometry = by_new.iter().filter(|n| n.geometry.is_some()).count();
    if with_geometry > 0 {
        if with_geometry != k {
            return Err(Error::Geometry("geometry must be given on every node or none".into()));
        }
        let geometry = by_new.iter().map(|n| n.geometry.clone().unwrap()).collect();
        return Ok(ParsedTree::Embedded(EmbeddedTree::new(tree, geometry)?));
    }
    let heights = by_new
        .iter()
        .map(|n| {
            n.height
                .ok_or_else(|| Error::Structure(format!("node {} has no height", n.id)))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ParsedTree::Merge(map_monotonicity(
        MergeTree::new(tree, heights, true),
        &new_id,
        &raw.nodes,
    )?))
}

/// Reports monotonicity errors with the ids used in the input.
fn map_monotonicity(r: Result<MergeTree>, new_id: &[NodeId], nodes: &[JsonNode]) -> Result<MergeTree> {
    r.map_err(|e| match e {
        Error::Monotonicity {
            child,
            parent,
            child_height,
            parent_height,
        } => {
            let old = |v: usize| new_id.iter().position(|&n| n == v).map(|o| nodes[o].id as usize).unwrap_or(v);
            Error::Monotonicity {
                child: old(child),
                parent: old(parent),
                child_height,
                parent_height,
            }
        }
        other => other,
    })
}

fn json_nodes(tree: &RootedTree, mut extra: impl FnMut(NodeId, &mut JsonNode)) -> JsonTree {
    let (canon, new_id) = tree.canonical_order();
    let mut order = vec![0; tree.len()];
    for (old, &new) in new_id.iter().enumerate() {
        order[new] = old;
    }
    let nodes = order
        .iter()
        .enumerate()
        .map(|(new, &old)| {
            let mut n = JsonNode {
                id: new as i64,
                parent: canon.parent(new).map(|p| p as i64),
                height: None,
                label: tree.label(old).map(String::from),
                geometry: None,
            };
            extra(old, &mut n);
            n
        })
        .collect();
    JsonTree { nodes }
}

pub fn merge_to_json(m: &MergeTree) -> String {
    let t = json_nodes(m.tree(), |v, n| n.height = Some(m.height(v)));
    serde_json::to_string(&t).expect("tree serializes")
}

pub fn embedded_to_json(e: &EmbeddedTree) -> String {
    let t = json_nodes(e.tree(), |v, n| n.geometry = Some(e.edge(v).to_vec()));
    serde_json::to_string(&t).expect("tree serializes")
}

pub fn merge_to_newick(m: &MergeTree) -> String {
    fn rec(m: &MergeTree, v: NodeId, out: &mut String) {
        let kids = m.tree().children(v);
        if !kids.is_empty() {
            out.push('(');
            for (i, &c) in kids.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                rec(m, c, out);
            }
            out.push(')');
        }
        if let Some(l) = m.tree().label(v) {
            out.push_str(l);
        }
        let _ = write!(out, ":{}", m.height(v));
    }
    let mut out = String::new();
    rec(m, m.tree().root(), &mut out);
    out.push(';');
    out
}

struct NewickParser<'a> {
    s: &'a [u8],
    pos: usize,
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
    labels: Vec<Option<String>>,
    heights: Vec<f64>,
}

impl NewickParser<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn subtree(&mut self, parent: Option<NodeId>) -> Result<NodeId> {
        let id = self.parent.len();
        self.parent.push(parent);
        self.children.push(Vec::new());
        self.labels.push(None);
        self.heights.push(f64::NAN);
        if let Some(p) = parent {
            self.children[p].push(id);
        }
        if self.peek() == Some(b'(') {
            self.pos += 1;
            loop {
                self.subtree(Some(id))?;
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return self.err("expected ',' or ')'"),
                }
            }
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && !b"(),:;".contains(&self.s[self.pos]) && !self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos > start {
            self.labels[id] = Some(String::from_utf8_lossy(&self.s[start..self.pos]).into_owned());
        }
        if self.peek() != Some(b':') {
            return self.err("expected ':height' after node");
        }
        self.pos += 1;
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_alphanumeric() || b"+-.".contains(&self.s[self.pos])) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
        match text.parse::<f64>() {
            Ok(h) if h.is_finite() => self.heights[id] = h,
            _ => {
                self.pos = start;
                return self.err(format!("invalid height '{text}'"));
            }
        }
        Ok(id)
    }
}

pub fn parse_newick(text: &str) -> Result<MergeTree> {
    let mut p = NewickParser {
        s: text.as_bytes(),
        pos: 0,
        parent: Vec::new(),
        children: Vec::new(),
        labels: Vec::new(),
        heights: Vec::new(),
    };
    p.subtree(None)?;
    if p.peek() == Some(b';') {
        p.pos += 1;
    }
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    let tree = RootedTree::from_parts(p.parent, p.children, p.labels)?;
    MergeTree::new(tree, p.heights, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labeled_trees_need_no_heights() {
        let t = parse_labeled(r#"{"nodes":[{"id":5,"parent":null,"label":"r"},{"id":2,"parent":5,"label":"x"}]}"#, TreeFormat::Json).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.label(1), Some("x"));
        assert!(parse_json(r#"{"nodes":[{"id":5,"parent":null}]}"#).is_err());
        assert_eq!(parse_labeled("(a:-1)r:0;", TreeFormat::NewickExt).unwrap().len(), 2);
    }

    #[test]
    fn single_node_json() {
        let t = parse_tree(r#"{"nodes":[{"id":7,"parent":null,"height":0}]}"#, TreeFormat::Json)
            .unwrap()
            .into_merge()
            .unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.height(0), 0.0);
    }

    #[test]
    fn json_monotonicity_reports_input_ids() {
        let err = parse_json(r#"{"nodes":[{"id":4,"parent":null,"height":0},{"id":9,"parent":4,"height":5}]}"#)
            .unwrap_err();
        assert!(matches!(err, Error::Monotonicity { child: 9, parent: 4, .. }), "{err:?}");
    }

    #[test]
    fn json_syntax_error_has_position() {
        let text = "{\"nodes\": [\n  {\"id\": 0, \"parent\": nul}]}";
        match parse_json(text).unwrap_err() {
            Error::Syntax { pos, .. } => assert!(pos > 12 && pos <= text.len(), "{pos}"),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn json_rejects_cycles_and_orphans() {
        let two_roots = r#"{"nodes":[{"id":0,"parent":null,"height":0},{"id":1,"parent":null,"height":-1}]}"#;
        assert!(matches!(parse_json(two_roots), Err(Error::Structure(_))));
        let cycle = r#"{"nodes":[{"id":0,"parent":null,"height":0},{"id":1,"parent":2,"height":-1},{"id":2,"parent":1,"height":-2}]}"#;
        assert!(matches!(parse_json(cycle), Err(Error::Structure(_))));
        let orphan = r#"{"nodes":[{"id":0,"parent":null,"height":0},{"id":1,"parent":5,"height":-1}]}"#;
        assert!(matches!(parse_json(orphan), Err(Error::Structure(_))));
    }

    #[test]
    fn newick_example() {
        let t = parse_newick("((a:-3,b:-2):-1)root:0").unwrap();
        assert_eq!(t.len(), 4);
        assert_eq!(t.tree().label(0), Some("root"));
        assert_eq!(t.heights(), &[0.0, -1.0, -3.0, -2.0]);
        assert_eq!(merge_to_newick(&t), "((a:-3,b:-2):-1)root:0;");
    }

    #[test]
    fn newick_errors() {
        assert!(matches!(parse_newick("(a:-1,b:-2"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_newick("(a:-1)r"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_newick("(a:1)r:0"), Err(Error::Monotonicity { .. })));
        assert!(matches!(parse_newick("a:0 junk"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn embedded_json_round_trip() {
        let text = r#"{"nodes":[
            {"id":0,"parent":null,"geometry":[[0,0]]},
            {"id":1,"parent":0,"geometry":[[0,0],[1,1],[2,0]]}]}"#;
        let e = parse_json(text).unwrap().into_embedded().unwrap();
        let again = parse_json(&embedded_to_json(&e)).unwrap().into_embedded().unwrap();
        assert_eq!(e, again);
    }
}
