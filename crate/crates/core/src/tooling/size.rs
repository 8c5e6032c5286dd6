//! Size breakdown of serialized structures, exported as JSON or as a
//! standalone HTML sunburst.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

/// Nested byte counts of a serialized structure.
///
/// `size` is the node's total: its own payload plus all children.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeTree {
    pub name: String,
    pub size: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<SizeTree>,
}

impl SizeTree {
    pub fn new(name: impl Into<String>, size: u64, children: Vec<SizeTree>) -> Self {
        SizeTree { name: name.into(), size, children }
    }

    pub fn leaf(name: impl Into<String>, size: u64) -> Self {
        Self::new(name, size, Vec::new())
    }

    pub fn self_size(&self) -> u64 {
        self.size - self.children.iter().map(|c| c.size).sum::<u64>()
    }

    pub fn child(&self, name: &str) -> Option<&SizeTree> {
        self.children.iter().find(|c| c.name == name)
    }

    /// Follows a `/`-separated path of child names.
    pub fn find(&self, path: &str) -> Option<&SizeTree> {
        path.split('/').filter(|s| !s.is_empty()).try_fold(self, |node, part| node.child(part))
    }

    /// True when every node's size covers its children exactly or with a
    /// non-negative own payload.
    pub fn is_consistent(&self) -> bool {
        let sum: u64 = self.children.iter().map(|c| c.size).sum();
        sum <= self.size && self.children.iter().all(SizeTree::is_consistent)
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("size tree serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Self-contained HTML page rendering the tree as a zoomable sunburst.
    pub fn to_html(&self, title: &str) -> String {
        let data = serde_json::to_string(self).expect("size tree serializes");
        let mut out = String::with_capacity(data.len() + SUNBURST_TEMPLATE.len());
        let escaped_title = html_escape(title);
        // `</` cannot appear inside the inline script.
        let data = data.replace("</", "<\\/");
        let _ = write!(
            out,
            "{}",
            SUNBURST_TEMPLATE.replace("__TITLE__", &escaped_title).replace("__DATA__", &data)
        );
        out
    }
}

fn html_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

const SUNBURST_TEMPLATE: &str = r##"<!DOCTYPE html>
<html>
<head>
<meta charset="utf-8">
<title>__TITLE__</title>
<style>
body { font-family: sans-serif; margin: 1em; }
#info { height: 2.5em; }
path { stroke: #fff; stroke-width: 0.5; cursor: pointer; }
</style>
</head>
<body>
<h3>__TITLE__</h3>
<div id="info">Click a segment to zoom, click the centre to zoom out.</div>
<svg id="chart" width="640" height="640" viewBox="-320 -320 640 640"></svg>
<script>
const data = __DATA__;
const NS = "http://www.w3.org/2000/svg";
const svg = document.getElementById("chart");
const info = document.getElementById("info");
const palette = ["#4e79a7","#f28e2b","#e15759","#76b7b2","#59a14f","#edc948","#b07aa1","#ff9da7","#9c755f","#bab0ac"];
function fmt(b) {
  const u = ["B","KiB","MiB","GiB"]; let i = 0; let v = b;
  while (v >= 1024 && i < u.length - 1) { v /= 1024; i++; }
  return v.toFixed(i ? 2 : 0) + " " + u[i];
}
function depthOf(n) {
  return 1 + (n.children || []).reduce((m, c) => Math.max(m, depthOf(c)), 0);
}
function arc(r0, r1, a0, a1) {
  if (a1 - a0 >= 2 * Math.PI - 1e-9) a1 = a0 + 2 * Math.PI - 1e-6;
  const big = a1 - a0 > Math.PI ? 1 : 0;
  const p = (r, a) => [r * Math.sin(a), -r * Math.cos(a)];
  const [x0, y0] = p(r1, a0), [x1, y1] = p(r1, a1), [x2, y2] = p(r0, a1), [x3, y3] = p(r0, a0);
  return `M${x0},${y0}A${r1},${r1} 0 ${big} 1 ${x1},${y1}L${x2},${y2}A${r0},${r0} 0 ${big} 0 ${x3},${y3}Z`;
}
let stack = [];
function draw(root) {
  while (svg.firstChild) svg.removeChild(svg.firstChild);
  const levels = depthOf(root);
  const ring = 300 / levels;
  function visit(node, depth, a0, a1, colour, path) {
    const el = document.createElementNS(NS, "path");
    el.setAttribute("d", depth === 0 ? arc(0, ring, 0, 2 * Math.PI) : arc(depth * ring, (depth + 1) * ring, a0, a1));
    el.setAttribute("fill", depth === 0 ? "#ddd" : colour);
    const pct = data.size ? (100 * node.size / data.size).toFixed(1) : "0";
    const label = path.concat([node.name]).join(" / ");
    el.addEventListener("mouseover", () => { info.textContent = `${label}: ${fmt(node.size)} (${pct}% of total)`; });
    el.addEventListener("click", () => {
      if (depth === 0) { if (stack.length) draw(stack.pop()); }
      else if (node.children && node.children.length) { stack.push(root); draw(node); }
    });
    svg.appendChild(el);
    let a = a0;
    (node.children || []).forEach((c, i) => {
      const span = node.size ? (a1 - a0) * c.size / node.size : 0;
      const col = depth === 0 ? palette[i % palette.length] : colour;
      if (span > 0) visit(c, depth + 1, a, a + span, col, path.concat([node.name]));
      a += span;
    });
  }
  visit(root, 0, 0, 2 * Math.PI, "#ddd", []);
}
draw(data);
</script>
</body>
</html>
"##;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn self_size_and_lookup() {
        let t = SizeTree::new(
            "root",
            100,
            vec![SizeTree::leaf("a", 30), SizeTree::new("b", 50, vec![SizeTree::leaf("c", 50)])],
        );
        assert_eq!(t.self_size(), 20);
        assert_eq!(t.find("b/c").unwrap().size, 50);
        assert!(t.is_consistent());
        let back = SizeTree::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn html_is_standalone() {
        let t = SizeTree::new("x</script>", 8, vec![]);
        let html = t.to_html("demo");
        assert!(!html.contains("http://") || html.contains("http://www.w3.org/2000/svg"));
        assert!(!html.contains("<script src"));
        assert!(!html.contains("x</script>"));
        assert!(html.contains("\"size\":8"));
    }
}
