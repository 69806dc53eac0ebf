//! Tree-expression grammar.
//!
//! ```text
//! root := ε | item | item item
//! item := leaf | "(" item item ")" | "t(" item [item] ")"
//! leaf := DIGIT | "{" INT "}" | "c" INT | "o" INT
//! ```
//!
//! Whitespace is ignored. A plain leaf is a single digit; labels of ten and
//! above are written in braces, `{12}`.

use super::{check_labels, ColoredTree, Tree, TreeError};

/// Result of [`parse_any`]: a plain tree or a colored tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedTree {
    Plain(Tree),
    Colored(ColoredTree),
}

#[derive(Debug)]
enum Ast {
    Empty,
    Plain(u32),
    Closed(u32),
    Open(u32),
    Node(Box<Ast>, Box<Ast>),
    Tau(Box<Ast>),
}

impl Ast {
    fn is_colored(&self) -> bool {
        match self {
            Ast::Empty | Ast::Plain(_) => false,
            Ast::Closed(_) | Ast::Open(_) | Ast::Tau(_) => true,
            Ast::Node(l, r) => l.is_colored() || r.is_colored(),
        }
    }
}

struct Parser {
    toks: Vec<(usize, char)>,
    i: usize,
}

impl Parser {
    fn new(text: &str) -> Parser {
        let toks = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        Parser { toks, i: 0 }
    }

    fn peek(&self) -> Option<char> {
        self.toks.get(self.i).map(|t| t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|t| t.0).unwrap_or_else(|| self.toks.last().map_or(0, |t| t.0 + 1))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, TreeError> {
        Err(TreeError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, c: char) -> Result<(), TreeError> {
        if self.peek() == Some(c) {
            self.i += 1;
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn int(&mut self) -> Result<u32, TreeError> {
        let start = self.i;
        let mut v: u64 = 0;
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            v = v * 10 + c.to_digit(10).unwrap() as u64;
            if v > u32::MAX as u64 {
                return self.err("label too large");
            }
            self.i += 1;
        }
        if self.i == start {
            return self.err("expected a label");
        }
        Ok(v as u32)
    }

    fn seq(&mut self) -> Result<Vec<Ast>, TreeError> {
        let mut items = Vec::new();
        while let Some(c) = self.peek() {
            if c == ')' {
                break;
            }
            items.push(self.item()?);
        }
        Ok(items)
    }

    fn item(&mut self) -> Result<Ast, TreeError> {
        match self.peek() {
            Some('(') => {
                let open = self.pos();
                self.i += 1;
                let mut items = self.seq()?;
                self.expect(')')?;
                if items.len() != 2 {
                    return Err(TreeError::Syntax {
                        pos: open,
                        msg: format!("a parenthesized node needs exactly two children, found {}", items.len()),
                    });
                }
                let r = items.pop().unwrap();
                let l = items.pop().unwrap();
                Ok(Ast::Node(Box::new(l), Box::new(r)))
            }
            Some('t') => {
                self.i += 1;
                self.expect('(')?;
                let open = self.pos();
                let items = self.seq()?;
                self.expect(')')?;
                let child = join(items, open)?;
                if matches!(child, Ast::Empty) {
                    return Err(TreeError::Syntax { pos: open, msg: "empty t(...)".into() });
                }
                Ok(Ast::Tau(Box::new(child)))
            }
            Some('c') => {
                self.i += 1;
                Ok(Ast::Closed(self.int()?))
            }
            Some('o') => {
                self.i += 1;
                Ok(Ast::Open(self.int()?))
            }
            Some('{') => {
                self.i += 1;
                let v = self.int()?;
                self.expect('}')?;
                Ok(Ast::Plain(v))
            }
            Some(c) if c.is_ascii_digit() => {
                self.i += 1;
                Ok(Ast::Plain(c.to_digit(10).unwrap()))
            }
            Some(c) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }
}

fn join(mut items: Vec<Ast>, pos: usize) -> Result<Ast, TreeError> {
    match items.len() {
        0 => Ok(Ast::Empty),
        1 => Ok(items.pop().unwrap()),
        2 => {
            let r = items.pop().unwrap();
            let l = items.pop().unwrap();
            Ok(Ast::Node(Box::new(l), Box::new(r)))
        }
        n => Err(TreeError::Syntax {
            pos,
            msg: format!("{n} juxtaposed subtrees; parentheses are required below the root"),
        }),
    }
}

fn to_plain(ast: &Ast) -> Tree {
    match ast {
        Ast::Empty => Tree::Empty,
        Ast::Plain(i) => Tree::Leaf(*i),
        Ast::Node(l, r) => Tree::node(to_plain(l), to_plain(r)),
        _ => unreachable!("colored node in plain tree"),
    }
}

fn to_colored(ast: &Ast) -> Result<ColoredTree, TreeError> {
    Ok(match ast {
        Ast::Empty => return Err(TreeError::Color("empty colored tree".into())),
        Ast::Plain(i) => return Err(TreeError::Color(format!("plain leaf {i} in a colored tree"))),
        Ast::Closed(i) => ColoredTree::Closed(*i),
        Ast::Open(i) => ColoredTree::Open(*i),
        Ast::Node(l, r) => ColoredTree::node(to_colored(l)?, to_colored(r)?),
        Ast::Tau(c) => ColoredTree::tau(to_colored(c)?),
    })
}

/// Parses either a plain or a colored tree expression.
pub fn parse_any(text: &str) -> Result<ParsedTree, TreeError> {
    let mut p = Parser::new(text);
    let items = p.seq()?;
    if p.peek().is_some() {
        return p.err("unbalanced ')'");
    }
    let ast = join(items, 0)?;
    if ast.is_colored() {
        let t = to_colored(&ast)?;
        t.validate()?;
        Ok(ParsedTree::Colored(t))
    } else {
        let t = to_plain(&ast);
        check_labels(&t.leaves(), 1)?;
        Ok(ParsedTree::Plain(t))
    }
}

/// Parses a plain labeled tree, e.g. `"(5(23))((17)(64))"`.
pub fn parse_tree(text: &str) -> Result<Tree, TreeError> {
    match parse_any(text)? {
        ParsedTree::Plain(t) => Ok(t),
        ParsedTree::Colored(_) => Err(TreeError::Color("expected a plain tree".into())),
    }
}

/// Parses a colored tree, e.g. `"(t(c2) o4)(t(c3 c1) o5)"`.
pub fn parse_colored(text: &str) -> Result<ColoredTree, TreeError> {
    match parse_any(text)? {
        ParsedTree::Colored(t) => Ok(t),
        ParsedTree::Plain(_) => Err(TreeError::Color("expected a colored tree".into())),
    }
}

fn plain_leaf(i: u32) -> String {
    if i < 10 {
        i.to_string()
    } else {
        format!("{{{i}}}")
    }
}

fn plain_item(t: &Tree, out: &mut String) {
    match t {
        Tree::Empty => {}
        Tree::Leaf(i) => out.push_str(&plain_leaf(*i)),
        Tree::Node(l, r) => {
            out.push('(');
            plain_item(l, out);
            plain_item(r, out);
            out.push(')');
        }
    }
}

/// Canonical text of a plain tree; the outermost parentheses are omitted.
pub fn format_tree(t: &Tree) -> String {
    let mut out = String::new();
    match t {
        Tree::Node(l, r) => {
            plain_item(l, &mut out);
            plain_item(r, &mut out);
        }
        _ => plain_item(t, &mut out),
    }
    out
}

fn push_sibling(out: &mut String, right: &str) {
    if !(out.ends_with(')') && right.starts_with('(')) {
        out.push(' ');
    }
    out.push_str(right);
}

fn colored_item(t: &ColoredTree) -> String {
    match t {
        ColoredTree::Node(..) => format!("({})", colored_root(t)),
        _ => colored_root(t),
    }
}

pub(crate) fn colored_root(t: &ColoredTree) -> String {
    match t {
        ColoredTree::Closed(i) => format!("c{i}"),
        ColoredTree::Open(i) => format!("o{i}"),
        ColoredTree::Tau(c) => format!("t({})", colored_root(c)),
        ColoredTree::Node(l, r) => {
            let mut out = colored_item(l);
            push_sibling(&mut out, &colored_item(r));
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_trees_round_trip() {
        for s in ["(5(23))((17)(64))", "1", "", "12", "((((((((12)3)4)5)6)7)8)9){10}"] {
            let t = parse_tree(s).unwrap_or_else(|e| panic!("{s}: {e}"));
            assert_eq!(format_tree(&t), s);
        }
        let c = parse_colored("(t(c2) o4)(t(c3 c1) o5)").unwrap();
        assert_eq!(c.rs(), (3, 2));
        assert_eq!(colored_root(&c), "(t(c2) o4)(t(c3 c1) o5)");
    }

    #[test]
    fn whitespace_is_ignored() {
        assert_eq!(parse_tree(" ( 5 (2 3) ) ((17)(6 4))").unwrap(), parse_tree("(5(23))((17)(64))").unwrap());
    }

    #[test]
    fn syntax_errors_report_positions() {
        assert!(matches!(parse_tree("(12"), Err(TreeError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_tree("123"), Err(TreeError::Syntax { .. })));
        assert!(matches!(parse_tree("(1)"), Err(TreeError::Syntax { pos: 0, .. })));
        assert!(matches!(parse_tree("1x"), Err(TreeError::Syntax { pos: 1, .. })));
        assert!(matches!(parse_tree("12)"), Err(TreeError::Syntax { .. })));
    }

    #[test]
    fn label_errors() {
        assert!(matches!(parse_tree("13"), Err(TreeError::Labels { .. })));
        assert!(matches!(parse_tree("11"), Err(TreeError::Labels { .. })));
        assert!(matches!(parse_colored("o3 t(c1)"), Err(TreeError::Labels { .. })));
        assert!(matches!(parse_colored("o2 o1"), Err(TreeError::OpenOrder(_))));
        assert!(matches!(parse_colored("c1 o2"), Err(TreeError::Color(_))));
        assert!(matches!(parse_colored("t(o1)"), Err(TreeError::Color(_))));
    }
}
