//! Clique-width expressions: parsing, printing, evaluation and irredundancy.
//!
//! An expression is stored as its postfix node sequence, so every traversal
//! here (and in the solvers) runs with an explicit stack and handles deep
//! terms without recursion.
//!
//! File format:
//!
//! ```text
//! cwexpr k=2
//! ; a single edge
//! (add 1 2 (u (v a 1) (ren 1 2 (v b 1))))
//! ```

use crate::graph::{valid_name, Graph};
use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use thiserror::Error;

/// Labels are `1..=MAX_LABELS`; label `0` is reserved for the solvers.
pub const MAX_LABELS: usize = 63;

pub type Label = u8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("vertex name `{0}` is used more than once")]
    DuplicateName(String),
    #[error("invalid vertex name `{0}`")]
    InvalidName(String),
    #[error("label {label} is outside 1..={k}")]
    LabelOutOfRange { label: u64, k: usize },
    #[error("relabel/add-edges with equal labels {0} {0}")]
    EqualLabels(Label),
    #[error("declared k={0} is not in 1..={MAX_LABELS}")]
    BadK(usize),
    #[error("malformed expression: {0}")]
    Malformed(&'static str),
    #[error("add-edges node {node} is partially redundant ({existing} of {total} edges already present)")]
    PartiallyRedundant {
        node: usize,
        existing: usize,
        total: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    /// A new vertex with label 1; weight defaults to 1 when absent.
    Introduce { name: String, weight: Option<u64> },
    Relabel { from: Label, to: Label },
    AddEdges { i: Label, j: Label },
    /// Disjoint union of the two most recent subterms.
    Union,
}

/// A well-formed k-expression in postfix form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CwExpression {
    k: usize,
    nodes: Vec<Node>,
}

/// A graph together with the label of every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledGraph {
    pub graph: Graph,
    pub labels: Vec<Label>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Redundancy {
    Full,
    Partial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedundantAdd {
    /// Position in the postfix node sequence.
    pub node: usize,
    pub i: Label,
    pub j: Label,
    pub kind: Redundancy,
    pub existing: usize,
    pub total: usize,
}

impl CwExpression {
    /// `(v name weight)` with `k = 1`.
    pub fn vertex(name: &str, weight: Option<u64>) -> Self {
        CwExpression {
            k: 1,
            nodes: vec![Node::Introduce {
                name: name.to_string(),
                weight,
            }],
        }
    }

    pub fn ren(mut self, from: Label, to: Label) -> Self {
        self.k = self.k.max(from as usize).max(to as usize);
        self.nodes.push(Node::Relabel { from, to });
        self
    }

    pub fn add(mut self, i: Label, j: Label) -> Self {
        self.k = self.k.max(i as usize).max(j as usize);
        self.nodes.push(Node::AddEdges { i, j });
        self
    }

    pub fn union(mut self, other: CwExpression) -> Self {
        self.k = self.k.max(other.k);
        self.nodes.extend(other.nodes);
        self.nodes.push(Node::Union);
        self
    }

    /// Raises the declared number of labels.
    pub fn with_k(mut self, k: usize) -> Self {
        self.k = self.k.max(k);
        self
    }

    /// Builds and validates an expression from raw postfix nodes.
    pub fn from_nodes(k: usize, nodes: Vec<Node>) -> Result<Self, ExprError> {
        let e = CwExpression { k, nodes };
        e.validate()?;
        Ok(e)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    /// Vertex names in id order (the order of introduction in postfix).
    pub fn vertex_names(&self) -> Vec<&str> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Introduce { name, .. } => Some(name.as_str()),
                _ => None,
            })
            .collect()
    }

    pub fn vertex_weights(&self) -> Vec<u64> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Introduce { weight, .. } => Some(weight.unwrap_or(1)),
                _ => None,
            })
            .collect()
    }

    pub fn num_vertices(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Introduce { .. }))
            .count()
    }

    pub fn unary_count(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Relabel { .. } | Node::AddEdges { .. }))
            .count()
    }

    pub fn union_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Union)).count()
    }

    /// Replaces vertex weights in id order.
    pub fn with_weights(mut self, weights: &[u64]) -> Self {
        let mut it = weights.iter();
        for n in &mut self.nodes {
            if let Node::Introduce { weight, .. } = n {
                *weight = Some(*it.next().expect("one weight per vertex"));
            }
        }
        self
    }

    pub fn validate(&self) -> Result<(), ExprError> {
        if self.k == 0 || self.k > MAX_LABELS {
            return Err(ExprError::BadK(self.k));
        }
        let check = |l: Label| {
            if l == 0 || l as usize > self.k {
                Err(ExprError::LabelOutOfRange {
                    label: l as u64,
                    k: self.k,
                })
            } else {
                Ok(())
            }
        };
        let mut names = HashSet::new();
        let mut depth = 0usize;
        for n in &self.nodes {
            match n {
                Node::Introduce { name, .. } => {
                    if !valid_name(name) {
                        return Err(ExprError::InvalidName(name.clone()));
                    }
                    if !names.insert(name.as_str()) {
                        return Err(ExprError::DuplicateName(name.clone()));
                    }
                    depth += 1;
                }
                Node::Relabel { from: a, to: b } | Node::AddEdges { i: a, j: b } => {
                    check(*a)?;
                    check(*b)?;
                    if a == b {
                        return Err(ExprError::EqualLabels(*a));
                    }
                    if depth == 0 {
                        return Err(ExprError::Malformed("unary operation without operand"));
                    }
                }
                Node::Union => {
                    if depth < 2 {
                        return Err(ExprError::Malformed("union without two operands"));
                    }
                    depth -= 1;
                }
            }
        }
        match depth {
            1 => Ok(()),
            0 => Err(ExprError::Malformed("empty expression")),
            _ => Err(ExprError::Malformed("more than one top-level term")),
        }
    }

    /// Child node indices for every node (postfix positions).
    fn children(&self) -> Vec<[usize; 2]> {
        let mut stack = Vec::new();
        let mut out = vec![[usize::MAX; 2]; self.nodes.len()];
        for (idx, n) in self.nodes.iter().enumerate() {
            match n {
                Node::Introduce { .. } => {}
                Node::Relabel { .. } | Node::AddEdges { .. } => {
                    out[idx][0] = stack.pop().expect("validated");
                }
                Node::Union => {
                    let b = stack.pop().expect("validated");
                    let a = stack.pop().expect("validated");
                    out[idx] = [a, b];
                }
            }
            stack.push(idx);
        }
        out
    }

    /// The term without header, on one line.
    pub fn term_string(&self) -> String {
        if self.nodes.is_empty() {
            return String::new();
        }
        let children = self.children();
        enum Step {
            Open(usize),
            Text(&'static str),
        }
        let mut out = String::new();
        let mut stack = vec![Step::Open(self.nodes.len() - 1)];
        while let Some(step) = stack.pop() {
            match step {
                Step::Text(t) => out.push_str(t),
                Step::Open(idx) => match &self.nodes[idx] {
                    Node::Introduce { name, weight } => {
                        let _ = match weight {
                            Some(w) => write!(out, "(v {name} {w})"),
                            None => write!(out, "(v {name})"),
                        };
                    }
                    Node::Relabel { from, to } => {
                        let _ = write!(out, "(ren {from} {to} ");
                        stack.push(Step::Text(")"));
                        stack.push(Step::Open(children[idx][0]));
                    }
                    Node::AddEdges { i, j } => {
                        let _ = write!(out, "(add {i} {j} ");
                        stack.push(Step::Text(")"));
                        stack.push(Step::Open(children[idx][0]));
                    }
                    Node::Union => {
                        out.push_str("(u ");
                        stack.push(Step::Text(")"));
                        stack.push(Step::Open(children[idx][1]));
                        stack.push(Step::Text(" "));
                        stack.push(Step::Open(children[idx][0]));
                    }
                },
            }
        }
        out
    }

    /// Header line plus term.
    pub fn serialize(&self) -> String {
        format!("cwexpr k={}\n{}\n", self.k, self.term_string())
    }

    pub fn parse(text: &str) -> Result<Self, ExprError> {
        parse_expression(text)
    }

    /// The labeled graph the expression denotes; vertex ids follow introduction order.
    pub fn evaluate(&self) -> LabeledGraph {
        self.walk(|_, _| {})
    }

    /// Offending add-edges nodes; empty iff the expression is irredundant.
    pub fn check_irredundant(&self) -> Vec<RedundantAdd> {
        let mut report = Vec::new();
        self.walk(|node, (i, j, existing, total)| {
            if total > 0 && existing > 0 {
                report.push(RedundantAdd {
                    node,
                    i,
                    j,
                    kind: if existing == total {
                        Redundancy::Full
                    } else {
                        Redundancy::Partial
                    },
                    existing,
                    total,
                });
            }
        });
        report
    }

    /// Removes fully redundant add-edges nodes; fails on partially redundant ones.
    pub fn strip_redundant_adds(&self) -> Result<CwExpression, ExprError> {
        let report = self.check_irredundant();
        if let Some(p) = report.iter().find(|r| r.kind == Redundancy::Partial) {
            return Err(ExprError::PartiallyRedundant {
                node: p.node,
                existing: p.existing,
                total: p.total,
            });
        }
        let drop: HashSet<usize> = report.iter().map(|r| r.node).collect();
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .filter(|(idx, _)| !drop.contains(idx))
            .map(|(_, n)| n.clone())
            .collect();
        Ok(CwExpression { k: self.k, nodes })
    }

    /// Bottom-up evaluation, reporting `(i, j, existing, total)` cross pairs at every add node.
    fn walk(
        &self,
        mut on_add: impl FnMut(usize, (Label, Label, usize, usize)),
    ) -> LabeledGraph {
        let mut graph = Graph::new();
        let mut labels: Vec<Label> = Vec::new();
        // Each frame lists the vertices of its subterm per label (index 0 unused).
        let mut stack: Vec<Vec<Vec<u32>>> = Vec::new();
        for (idx, n) in self.nodes.iter().enumerate() {
            match n {
                Node::Introduce { name, weight } => {
                    let v = graph
                        .add_vertex(name, weight.unwrap_or(1))
                        .expect("validated names");
                    labels.push(1);
                    let mut classes = vec![Vec::new(); self.k + 1];
                    classes[1].push(v);
                    stack.push(classes);
                }
                Node::Relabel { from, to } => {
                    let top = stack.last_mut().expect("validated");
                    let moved = std::mem::take(&mut top[*from as usize]);
                    for &v in &moved {
                        labels[v as usize] = *to;
                    }
                    top[*to as usize].extend(moved);
                }
                Node::AddEdges { i, j } => {
                    let top = stack.last().expect("validated");
                    let (ci, cj) = (&top[*i as usize], &top[*j as usize]);
                    let total = ci.len() * cj.len();
                    let mut existing = 0;
                    for &a in ci {
                        for &b in cj {
                            if graph.has_edge(a, b) {
                                existing += 1;
                            }
                        }
                    }
                    on_add(idx, (*i, *j, existing, total));
                    for &a in ci {
                        for &b in cj {
                            if !graph.has_edge(a, b) {
                                graph.add_edge(a, b).expect("distinct classes");
                            }
                        }
                    }
                }
                Node::Union => {
                    let b = stack.pop().expect("validated");
                    let a = stack.last_mut().expect("validated");
                    for (ca, cb) in a.iter_mut().zip(b) {
                        ca.extend(cb);
                    }
                }
            }
        }
        LabeledGraph { graph, labels }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    text: &'a str,
    line: usize,
    column: usize,
}

#[derive(Debug, PartialEq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
    Eof,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Lexer {
            chars: text.char_indices().peekable(),
            text,
            line,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    /// Next token and its starting position.
    fn next(&mut self) -> (Tok<'a>, usize, usize) {
        loop {
            match self.chars.peek().map(|&(_, c)| c) {
                Some(';') => {
                    while let Some(c) = self.bump() {
                        if c == '\n' {
                            break;
                        }
                    }
                }
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                _ => break,
            }
        }
        let (line, column) = (self.line, self.column);
        let Some(&(start, c)) = self.chars.peek() else {
            return (Tok::Eof, line, column);
        };
        match c {
            '(' => {
                self.bump();
                (Tok::Open, line, column)
            }
            ')' => {
                self.bump();
                (Tok::Close, line, column)
            }
            _ => {
                let mut end = start;
                while let Some(&(i, c)) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    end = i + c.len_utf8();
                    self.bump();
                }
                (Tok::Atom(&self.text[start..end]), line, column)
            }
        }
    }
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ExprError {
    ExprError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Parses an expression file. The `cwexpr k=<K>` header is optional; without
/// it `k` is the largest label mentioned (at least 1).
pub fn parse_expression(text: &str) -> Result<CwExpression, ExprError> {
    let mut declared = None;
    let mut body = text;
    let mut first_line = 1;
    for (n, line) in text.split_inclusive('\n').enumerate() {
        let content = line.split(';').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("cwexpr") {
            let k = rest
                .trim()
                .strip_prefix("k=")
                .and_then(|k| k.trim().parse::<usize>().ok())
                .ok_or_else(|| syntax(n + 1, 1, "expected header `cwexpr k=<K>`"))?;
            declared = Some(k);
            let offset: usize = text.split_inclusive('\n').take(n + 1).map(str::len).sum();
            body = &text[offset..];
            first_line = n + 2;
        }
        break;
    }

    enum Frame {
        Unary(Node),
        Union(u8),
    }
    let mut lex = Lexer::new(body, first_line);
    let mut nodes = Vec::new();
    let mut frames: Vec<Frame> = Vec::new();
    let mut max_label = 1usize;

    let label = |tok: Tok, line, column, max_label: &mut usize| -> Result<Label, ExprError> {
        match tok {
            Tok::Atom(a) => {
                let v: u64 = a
                    .parse()
                    .map_err(|_| syntax(line, column, format!("expected a label, found `{a}`")))?;
                if v == 0 || v > MAX_LABELS as u64 {
                    return Err(ExprError::LabelOutOfRange {
                        label: v,
                        k: declared.unwrap_or(MAX_LABELS),
                    });
                }
                *max_label = (*max_label).max(v as usize);
                Ok(v as Label)
            }
            _ => Err(syntax(line, column, "expected a label")),
        }
    };

    loop {
        // Parse one term start.
        let (tok, line, column) = lex.next();
        if tok != Tok::Open {
            return Err(syntax(line, column, "expected `(`"));
        }
        let (op, line, column) = lex.next();
        match op {
            Tok::Atom("v") => {
                let (name, nl, nc) = lex.next();
                let Tok::Atom(name) = name else {
                    return Err(syntax(nl, nc, "expected a vertex name"));
                };
                if !valid_name(name) {
                    return Err(syntax(nl, nc, format!("invalid vertex name `{name}`")));
                }
                let (next, wl, wc) = lex.next();
                let weight = match next {
                    Tok::Close => None,
                    Tok::Atom(w) => {
                        let w = w
                            .parse::<u64>()
                            .map_err(|_| syntax(wl, wc, format!("invalid weight `{w}`")))?;
                        let (close, cl, cc) = lex.next();
                        if close != Tok::Close {
                            return Err(syntax(cl, cc, "expected `)`"));
                        }
                        Some(w)
                    }
                    _ => return Err(syntax(wl, wc, "expected a weight or `)`")),
                };
                nodes.push(Node::Introduce {
                    name: name.to_string(),
                    weight,
                });
            }
            Tok::Atom(kw @ ("ren" | "add")) => {
                let (t, l, c) = lex.next();
                let a = label(t, l, c, &mut max_label)?;
                let (t, l, c) = lex.next();
                let b = label(t, l, c, &mut max_label)?;
                if a == b {
                    return Err(ExprError::EqualLabels(a));
                }
                frames.push(Frame::Unary(if kw == "ren" {
                    Node::Relabel { from: a, to: b }
                } else {
                    Node::AddEdges { i: a, j: b }
                }));
                continue;
            }
            Tok::Atom("u") => {
                frames.push(Frame::Union(0));
                continue;
            }
            Tok::Atom(other) => {
                return Err(syntax(line, column, format!("unknown operation `{other}`")));
            }
            _ => return Err(syntax(line, column, "expected an operation")),
        }
        // A term just completed: close enclosing frames that are now full.
        loop {
            match frames.last_mut() {
                None => {
                    let (tok, line, column) = lex.next();
                    if tok != Tok::Eof {
                        return Err(syntax(line, column, "trailing input after expression"));
                    }
                    let k = declared.unwrap_or(max_label);
                    return CwExpression::from_nodes(k, nodes);
                }
                Some(Frame::Union(seen)) if *seen == 0 => {
                    *seen = 1;
                    break;
                }
                Some(_) => {
                    let (tok, line, column) = lex.next();
                    if tok != Tok::Close {
                        return Err(syntax(line, column, "expected `)`"));
                    }
                    match frames.pop().expect("non-empty") {
                        Frame::Unary(n) => nodes.push(n),
                        Frame::Union(_) => nodes.push(Node::Union),
                    }
                }
            }
        }
    }
}

/// Index of each vertex name in introduction order.
pub fn name_index(expr: &CwExpression) -> HashMap<String, u32> {
    expr.vertex_names()
        .into_iter()
        .enumerate()
        .map(|(i, n)| (n.to_string(), i as u32))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const K3: &str = "(add 1 2 (u (ren 2 1 (add 1 2 (u (v a 1) (ren 1 2 (v b 1))))) (ren 1 2 (v c 1))))";

    #[test]
    fn parse_introduce() {
        let e = parse_expression("(v a 3)").unwrap();
        assert_eq!(
            e.nodes(),
            &[Node::Introduce {
                name: "a".into(),
                weight: Some(3)
            }]
        );
        assert_eq!(e.k(), 1);
    }

    #[test]
    fn parse_edge_term() {
        let e = parse_expression("(add 1 2 (u (v a 1) (ren 1 2 (v b 1))))").unwrap();
        assert_eq!(e.k(), 2);
        assert_eq!(e.nodes().len(), 5);
        assert_eq!(e.nodes()[4], Node::AddEdges { i: 1, j: 2 });
        let g = e.evaluate();
        assert_eq!(g.graph.num_edges(), 1);
        assert_eq!(g.labels, vec![1, 2]);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_expression("(ren 1 1 (v a 1))"),
            Err(ExprError::EqualLabels(1))
        );
        assert!(matches!(
            parse_expression("(u (v a) (v a))"),
            Err(ExprError::DuplicateName(_))
        ));
        assert!(matches!(
            parse_expression("cwexpr k=2\n(ren 1 3 (v a))"),
            Err(ExprError::LabelOutOfRange { label: 3, k: 2 })
        ));
        assert!(matches!(
            parse_expression("cwexpr k=2\n(u (v a)\n  (x b))"),
            Err(ExprError::Syntax { line: 3, column: 4, .. })
        ));
        assert!(matches!(parse_expression("(v a) (v b)"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_expression("(u (v a))"), Err(ExprError::Syntax { .. })));
        assert!(matches!(parse_expression(""), Err(ExprError::Syntax { .. })));
    }

    #[test]
    fn header_and_comments() {
        let text = "; leading comment\ncwexpr k=4 ; four labels\n(ren 1 2 ; move\n (v a))\n";
        let e = parse_expression(text).unwrap();
        assert_eq!(e.k(), 4);
        assert_eq!(e.serialize(), "cwexpr k=4\n(ren 1 2 (v a))\n");
    }

    #[test]
    fn serialize_round_trip() {
        let e = parse_expression(K3).unwrap();
        assert_eq!(e.term_string(), K3);
        assert_eq!(parse_expression(&e.serialize()).unwrap(), e);
    }

    #[test]
    fn evaluate_triangle() {
        let g = parse_expression(K3).unwrap().evaluate();
        assert_eq!(g.graph.n(), 3);
        assert_eq!(g.graph.num_edges(), 3);
        let single = parse_expression("(v a)").unwrap().evaluate();
        assert_eq!((single.graph.n(), single.graph.num_edges()), (1, 0));
        assert_eq!(single.graph.weights(), &[1]);
        let empty_class = parse_expression("(add 1 2 (v a))").unwrap().evaluate();
        assert_eq!(empty_class.graph.num_edges(), 0);
    }

    #[test]
    fn irredundancy_reports() {
        assert!(parse_expression(K3).unwrap().check_irredundant().is_empty());
        let double = parse_expression("(add 1 2 (add 1 2 (u (v a 1) (ren 1 2 (v b 1)))))").unwrap();
        let report = double.check_irredundant();
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].node, 5);
        assert_eq!(report[0].kind, Redundancy::Full);
        let stripped = double.strip_redundant_adds().unwrap();
        assert!(stripped.check_irredundant().is_empty());
        assert_eq!(stripped.evaluate(), double.evaluate());
        assert_eq!(stripped.nodes().len(), 5);

        // a-b exists; c joins class 2 later, so the second add has 1 of 2 edges.
        let partial = parse_expression(
            "(add 1 2 (u (add 1 2 (u (v a 1) (ren 1 2 (v b 1)))) (ren 1 2 (v c 1))))",
        )
        .unwrap();
        let report = partial.check_irredundant();
        assert_eq!(report.len(), 1);
        assert_eq!(report[0].kind, Redundancy::Partial);
        assert_eq!((report[0].existing, report[0].total), (1, 2));
        assert!(matches!(
            partial.strip_redundant_adds(),
            Err(ExprError::PartiallyRedundant { .. })
        ));

        let clean = parse_expression(K3).unwrap();
        assert_eq!(clean.strip_redundant_adds().unwrap(), clean);
    }

    #[test]
    fn deep_terms_do_not_recurse() {
        let mut e = CwExpression::vertex("x0", None);
        for i in 1..20_000 {
            e = e.union(CwExpression::vertex(&format!("x{i}"), None));
        }
        let text = e.serialize();
        let back = parse_expression(&text).unwrap();
        assert_eq!(back.num_vertices(), 20_000);
        assert_eq!(back.evaluate().graph.n(), 20_000);
    }
}
