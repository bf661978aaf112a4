use std::collections::HashMap;
use std::fmt::Write as _;

use treemetrics_core::{ParsedTree, PointRef};

fn node_label(t: &ParsedTree, v: usize) -> String {
    let name = t.tree().label(v).map_or_else(|| v.to_string(), str::to_string);
    match t {
        ParsedTree::Merge(m) => format!("{name}\\nh={}", m.height(v)),
        ParsedTree::Embedded(e) => {
            let [x, y] = e.position(v);
            format!("{name}\\n({x}, {y})")
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('"', "\\\"")
}

struct Side<'a> {
    prefix: &'static str,
    tree: &'a ParsedTree,
    extra: Vec<String>,
    points: HashMap<String, String>,
}

impl Side<'_> {
    /// DOT id for a point, creating a point-shaped node for points that
    /// are not tree nodes.
    fn id(&mut self, p: &PointRef) -> String {
        let desc = match *p {
            PointRef::Node(v) => return format!("{}{v}", self.prefix),
            PointRef::Edge { child, t } => format!("edge {child} t={t}"),
            PointRef::Ray { offset } => format!("ray +{offset}"),
        };
        let next = self.points.len();
        let prefix = self.prefix;
        let extra = &mut self.extra;
        self.points
            .entry(desc.clone())
            .or_insert_with(|| {
                let id = format!("{prefix}p{next}");
                extra.push(format!("    {id} [shape=point, xlabel=\"{}\"];", escape(&desc)));
                id
            })
            .clone()
    }

    fn write(&self, out: &mut String, indent: &str) {
        let t = self.tree.tree();
        for v in t.preorder() {
            let _ = writeln!(out, "{indent}{}{v} [label=\"{}\"];", self.prefix, escape(&node_label(self.tree, v)));
        }
        for v in t.preorder() {
            if let Some(p) = t.parent(v) {
                let _ = writeln!(out, "{indent}{0}{p} -> {0}{v};", self.prefix);
            }
        }
        for line in &self.extra {
            let _ = writeln!(out, "{indent}{}", line.trim_start());
        }
    }
}

/// DOT text for one tree, or for two trees in separate clusters with the
/// witness pairs drawn as dashed cross edges.
pub fn render(trees: &[ParsedTree], witness: &[(PointRef, PointRef)]) -> String {
    let mut out = String::from("digraph trees {\n    node [shape=ellipse];\n");
    if let [only] = trees {
        let side = Side {
            prefix: "n",
            tree: only,
            extra: Vec::new(),
            points: HashMap::new(),
        };
        side.write(&mut out, "    ");
        out.push_str("}\n");
        return out;
    }
    let mut a = Side {
        prefix: "a",
        tree: &trees[0],
        extra: Vec::new(),
        points: HashMap::new(),
    };
    let mut b = Side {
        prefix: "b",
        tree: &trees[1],
        extra: Vec::new(),
        points: HashMap::new(),
    };
    let cross: Vec<(String, String)> = witness.iter().map(|(p, q)| (a.id(p), b.id(q))).collect();
    for (name, side) in [("t1", &a), ("t2", &b)] {
        let _ = writeln!(out, "    subgraph cluster_{name} {{\n        label=\"{name}\";");
        side.write(&mut out, "        ");
        out.push_str("    }\n");
    }
    for (x, y) in cross {
        let _ = writeln!(out, "    {x} -> {y} [style=dashed, dir=none, constraint=false];");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use treemetrics_core::MergeTree;

    #[test]
    fn single_node() {
        let t = ParsedTree::Merge(MergeTree::path(&[0.0]).unwrap());
        let dot = render(&[t], &[]);
        assert_eq!(dot.matches("[label=").count(), 1);
        assert!(!dot.contains("->"));
    }

    #[test]
    fn overlay_counts_pairs_and_reuses_points() {
        let t = || ParsedTree::Merge(MergeTree::path(&[0.0, -2.0]).unwrap());
        let mid = PointRef::Edge { child: 1, t: 0.5 };
        let w = [(PointRef::Node(0), PointRef::Node(0)), (mid, mid), (mid, PointRef::Node(1))];
        let dot = render(&[t(), t()], &w);
        assert_eq!(dot.matches("style=dashed").count(), 3);
        assert_eq!(dot.matches("shape=point").count(), 2);
        assert_eq!(dot.matches("subgraph cluster_").count(), 2);
    }
}
