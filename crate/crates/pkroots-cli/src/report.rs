//! Machine-readable output: the JSON run record, and DOT/JSON renderings of
//! the recursion tree.

use std::fmt::Write as _;

use pkroots::{CountResult, TreeNode};
use serde::Serialize;

/// The stable JSON record emitted by every subcommand: same keys, same
/// order. Counts travel as decimal strings; they routinely exceed any
/// native width.
#[derive(Debug, Serialize)]
pub struct Report {
    pub p: String,
    pub k: u32,
    pub degree: usize,
    pub count_decimal: String,
    pub exact: bool,
    pub failures: Vec<Vec<u64>>,
    pub tree: Option<TreeSummary>,
    pub seed: String,
    pub elapsed_ms: f64,
}

#[derive(Debug, Serialize)]
pub struct TreeSummary {
    pub depth: u32,
    pub nodes: u64,
}

impl Report {
    pub fn new(
        p: u64,
        k: u32,
        degree: usize,
        result: &CountResult,
        tree: Option<TreeSummary>,
        seed: u64,
        elapsed_ms: f64,
    ) -> Self {
        Report {
            p: p.to_string(),
            k,
            degree,
            count_decimal: result.count.to_string(),
            exact: result.exact,
            failures: result.failures.clone(),
            tree,
            seed: seed.to_string(),
            elapsed_ms,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p = {}, k = {}, degree = {}", self.p, self.k, self.degree);
        let _ = writeln!(out, "count = {}", self.count_decimal);
        let _ = writeln!(out, "exact: {}", if self.exact { "yes" } else { "NO (lower bound)" });
        match &self.tree {
            Some(t) => {
                let _ = writeln!(out, "tree: depth {}, {} nodes", t.depth, t.nodes);
            }
            None => {
                let _ = writeln!(out, "tree: not materialized");
            }
        }
        let _ = writeln!(out, "seed = {}, elapsed = {:.3} ms", self.seed, self.elapsed_ms);
        out
    }
}

/// Graphviz rendering: root at top, nodes labelled `(depth, digits) k=K`,
/// edges labelled `p^(s-1)`.
pub fn render_dot(root: &TreeNode, p: u64) -> String {
    fn walk(node: &TreeNode, id: usize, counter: &mut usize, p: u64, out: &mut String) {
        let digits = node
            .path_digits
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(" ");
        let _ = writeln!(
            out,
            "  n{id} [label=\"({}, {}) k={}\"];",
            node.depth, digits, node.precision
        );
        for edge in &node.children {
            *counter += 1;
            let child = *counter;
            let _ = writeln!(
                out,
                "  n{id} -> n{child} [label=\"{}^{}\"];",
                p,
                edge.exponent - 1
            );
            walk(&edge.node, child, counter, p, out);
        }
    }

    let mut out = String::from("digraph pkroots_tree {\n  rankdir=TB;\n");
    let mut counter = 0;
    walk(root, 0, &mut counter, p, &mut out);
    out.push_str("}\n");
    out
}

#[derive(Debug, Serialize)]
pub struct TreeNodeJson {
    pub depth: u32,
    pub digits: Vec<u64>,
    pub precision: u32,
    pub nondegenerate_roots: u64,
    pub full_lift_roots: u64,
    pub children: Vec<TreeEdgeJson>,
}

#[derive(Debug, Serialize)]
pub struct TreeEdgeJson {
    pub exponent: u32,
    pub node: TreeNodeJson,
}

pub fn tree_to_json(node: &TreeNode) -> TreeNodeJson {
    TreeNodeJson {
        depth: node.depth,
        digits: node.path_digits.clone(),
        precision: node.precision,
        nondegenerate_roots: node.nondegenerate_roots,
        full_lift_roots: node.full_lift_roots,
        children: node
            .children
            .iter()
            .map(|e| TreeEdgeJson {
                exponent: e.exponent,
                node: tree_to_json(&e.node),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use pkroots::{build_tree, CountConfig, PolyMod, PrimePowerRing};

    fn running_tree() -> TreeNode {
        let ring = PrimePowerRing::new(3, 7).unwrap();
        let mut raw = vec![BigInt::from(0); 11];
        raw[0] = BigInt::from(738);
        raw[1] = BigInt::from(-10);
        raw[10] = BigInt::from(1);
        let f = PolyMod::from_integer_coeffs(ring, &raw).unwrap();
        build_tree(&f, 0, &CountConfig::default()).unwrap().0
    }

    #[test]
    fn dot_labels_nodes_and_edges() {
        let dot = render_dot(&running_tree(), 3);
        assert!(dot.starts_with("digraph pkroots_tree {"));
        assert!(dot.contains("n0 [label=\"(0, ) k=7\"];"));
        assert!(dot.contains("n1 [label=\"(1, 1) k=3\"];"));
        assert!(dot.contains("n2 [label=\"(2, 1 0) k=1\"];"));
        assert!(dot.contains("n0 -> n1 [label=\"3^3\"];"));
        assert!(dot.contains("n1 -> n2 [label=\"3^1\"];"));
    }

    #[test]
    fn json_report_key_order_is_stable() {
        let result = pkroots::CountResult {
            count: 190u32.into(),
            exact: true,
            failures: vec![],
            stats: pkroots::CountStats::default(),
        };
        let report = Report::new(3, 7, 10, &result, Some(TreeSummary { depth: 2, nodes: 3 }), 0, 1.5);
        let json = report.to_json();
        let keys = ["\"p\"", "\"k\"", "\"degree\"", "\"count_decimal\"", "\"exact\"", "\"failures\"", "\"tree\"", "\"seed\"", "\"elapsed_ms\""];
        let mut last = 0;
        for key in keys {
            let at = json.find(key).unwrap_or_else(|| panic!("{key} missing"));
            assert!(at >= last, "{key} out of order in {json}");
            last = at;
        }
    }
}
