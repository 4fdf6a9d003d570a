//! Dialect-neutral concrete syntax tree shared by every term language.

use num_bigint::BigInt;
use stagecraft_core::syntax::BinOp;

use super::lexer::{lex, Pos, SyntaxError, Tok, Token};

/// Reserved words; never valid as variable names.
pub const KEYWORDS: &[&str] = &[
    "next", "prev", "gen", "fix", "if", "then", "else", "true", "false", "forall", "box", "unbox", "brk", "esc", "run",
    "open", "close", "circ", "bot", "not", "assume", "declare",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SType {
    Base(String),
    Bot,
    Arrow(Box<SType>, Box<SType>),
    /// `<a>T`, or `<>T` when the variable is absent.
    Code(Option<String>, Box<SType>),
    Forall(String, Vec<String>, Box<SType>),
    Circ(Box<SType>),
    Square(Box<SType>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Prefix {
    Next(Option<String>),
    Prev(Option<String>),
    Box,
    Unbox(usize),
    Brk(Option<String>),
    Esc(Option<String>),
    Run,
    Open(Option<String>),
    Close(Option<String>),
    Csp,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub pos: Pos,
    pub kind: Kind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    Var(String),
    Int(BigInt),
    Bool(bool),
    Lam(String, Option<SType>, Box<Node>),
    Fix(String, Option<SType>, Box<Node>),
    /// `gen a @ [B]. M`, or the nameless `gen. M`.
    Gen(Option<String>, Vec<String>, Box<Node>),
    If(Box<Node>, Box<Node>, Box<Node>),
    BinOp(BinOp, Box<Node>, Box<Node>),
    App(Box<Node>, Box<Node>),
    Prefix(Prefix, Box<Node>),
    /// `M @[a b]`
    TApp(Box<Node>, Vec<String>),
    /// `M @! a`
    SIns(Box<Node>, String),
    /// `M @ n`
    NatApp(Box<Node>, usize),
    /// `M @!`
    UnitApp(Box<Node>),
}

impl Node {
    pub fn new(kind: Kind) -> Node {
        Node { pos: Pos::default(), kind }
    }
}

/// Where a context entry lives: a transition or a level number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum At {
    Stage(Vec<String>),
    Level(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    /// `assume x : T @ A;`
    Assume { pos: Pos, name: String, ty: SType, at: Option<At> },
    /// `declare a @ [A];`
    Declare { pos: Pos, name: String, stage: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub items: Vec<Item>,
    pub body: Node,
}

pub struct Parser {
    toks: Vec<Token>,
    i: usize,
}

type R<T> = Result<T, SyntaxError>;

impl Parser {
    pub fn new(src: &str) -> R<Parser> {
        Ok(Parser { toks: lex(src)?, i: 0 })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].tok.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn error<T>(&self, what: &str) -> R<T> {
        Err(SyntaxError::new(self.pos(), format!("expected {what}, found {}", self.peek())))
    }

    fn expect(&mut self, t: Tok) -> R<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.error(&t.to_string())
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.is_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_kw(&mut self, kw: &str) -> R<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            self.error(&format!("`{kw}`"))
        }
    }

    pub fn ident(&mut self) -> R<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            _ => self.error("an identifier"),
        }
    }

    fn number(&mut self) -> R<usize> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                n.try_into().or_else(|_| self.error("a small number"))
            }
            _ => self.error("a number"),
        }
    }

    pub fn finish(&mut self) -> R<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            self.error("end of input")
        }
    }

    /// `[a b c]`
    fn bracket_vars(&mut self) -> R<Vec<String>> {
        self.expect(Tok::LBracket)?;
        let mut out = Vec::new();
        while *self.peek() != Tok::RBracket {
            out.push(self.ident()?);
        }
        self.bump();
        Ok(out)
    }

    /// Optional `[a]` after a prefix keyword.
    fn opt_bracket_var(&mut self) -> R<Option<String>> {
        if *self.peek() != Tok::LBracket {
            return Ok(None);
        }
        self.bump();
        let v = self.ident()?;
        self.expect(Tok::RBracket)?;
        Ok(Some(v))
    }

    /// Declaration stage after `@`: `[a b]` or a bare list ending at `.`.
    fn decl_stage(&mut self) -> R<Vec<String>> {
        if *self.peek() == Tok::LBracket {
            return self.bracket_vars();
        }
        let mut out = Vec::new();
        while let Tok::Ident(_) = self.peek() {
            out.push(self.ident()?);
        }
        Ok(out)
    }

    pub fn document(&mut self) -> R<Document> {
        let mut items = Vec::new();
        loop {
            let pos = self.pos();
            if self.eat_kw("assume") {
                let name = self.ident()?;
                self.expect(Tok::Colon)?;
                let ty = self.ty()?;
                let at = if *self.peek() == Tok::At {
                    self.bump();
                    Some(match self.peek() {
                        Tok::Int(_) => At::Level(self.number()?),
                        Tok::LBracket => At::Stage(self.bracket_vars()?),
                        _ => return self.error("`[` or a level"),
                    })
                } else {
                    None
                };
                self.expect(Tok::Semi)?;
                items.push(Item::Assume { pos, name, ty, at });
            } else if self.eat_kw("declare") {
                let name = self.ident()?;
                let stage = if *self.peek() == Tok::At {
                    self.bump();
                    self.bracket_vars()?
                } else {
                    Vec::new()
                };
                self.expect(Tok::Semi)?;
                items.push(Item::Declare { pos, name, stage });
            } else {
                break;
            }
        }
        let body = self.expr()?;
        self.finish()?;
        Ok(Document { items, body })
    }

    pub fn ty(&mut self) -> R<SType> {
        if self.eat_kw("forall") {
            let a = self.ident()?;
            let decl = if *self.peek() == Tok::At {
                self.bump();
                self.decl_stage()?
            } else {
                Vec::new()
            };
            self.expect(Tok::Dot)?;
            return Ok(SType::Forall(a, decl, Box::new(self.ty()?)));
        }
        let left = self.prefix_ty()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            return Ok(SType::Arrow(Box::new(left), Box::new(self.ty()?)));
        }
        Ok(left)
    }

    fn prefix_ty(&mut self) -> R<SType> {
        match self.peek().clone() {
            Tok::Lt => {
                self.bump();
                let v = if *self.peek() == Tok::Gt { None } else { Some(self.ident()?) };
                self.expect(Tok::Gt)?;
                Ok(SType::Code(v, Box::new(self.prefix_ty()?)))
            }
            Tok::Ident(s) if s == "circ" => {
                self.bump();
                Ok(SType::Circ(Box::new(self.prefix_ty()?)))
            }
            Tok::Ident(s) if s == "box" => {
                self.bump();
                Ok(SType::Square(Box::new(self.prefix_ty()?)))
            }
            Tok::Ident(s) if s == "not" => {
                self.bump();
                Ok(SType::Arrow(Box::new(self.prefix_ty()?), Box::new(SType::Bot)))
            }
            Tok::Ident(s) if s == "bot" => {
                self.bump();
                Ok(SType::Bot)
            }
            Tok::Ident(_) => Ok(SType::Base(self.ident()?)),
            Tok::LParen => {
                self.bump();
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => self.error("a type"),
        }
    }

    fn starts_binder(&self) -> bool {
        *self.peek() == Tok::Backslash || self.is_kw("gen") || self.is_kw("fix") || self.is_kw("if")
    }

    pub fn expr(&mut self) -> R<Node> {
        let pos = self.pos();
        let kind = match self.peek() {
            Tok::Backslash => {
                self.bump();
                let x = self.ident()?;
                let t = if *self.peek() == Tok::Colon {
                    self.bump();
                    Some(self.ty()?)
                } else {
                    None
                };
                self.expect(Tok::Dot)?;
                Kind::Lam(x, t, Box::new(self.expr()?))
            }
            _ if self.is_kw("fix") => {
                self.bump();
                let f = self.ident()?;
                let t = if *self.peek() == Tok::Colon {
                    self.bump();
                    Some(self.ty()?)
                } else {
                    None
                };
                self.expect(Tok::Dot)?;
                Kind::Fix(f, t, Box::new(self.expr()?))
            }
            _ if self.is_kw("gen") => {
                self.bump();
                if *self.peek() == Tok::Dot {
                    self.bump();
                    Kind::Gen(None, Vec::new(), Box::new(self.expr()?))
                } else {
                    let a = self.ident()?;
                    let decl = if *self.peek() == Tok::At {
                        self.bump();
                        self.decl_stage()?
                    } else {
                        Vec::new()
                    };
                    self.expect(Tok::Dot)?;
                    Kind::Gen(Some(a), decl, Box::new(self.expr()?))
                }
            }
            _ if self.is_kw("if") => {
                self.bump();
                let c = self.expr()?;
                self.expect_kw("then")?;
                let t = self.expr()?;
                self.expect_kw("else")?;
                let e = self.expr()?;
                Kind::If(Box::new(c), Box::new(t), Box::new(e))
            }
            _ => return self.comparison(),
        };
        Ok(Node { pos, kind })
    }

    fn comparison(&mut self) -> R<Node> {
        let left = self.additive()?;
        if *self.peek() == Tok::Eq {
            let pos = self.pos();
            self.bump();
            let right = self.additive()?;
            return Ok(Node { pos, kind: Kind::BinOp(BinOp::Eq, Box::new(left), Box::new(right)) });
        }
        Ok(left)
    }

    fn additive(&mut self) -> R<Node> {
        let mut left = self.multiplicative()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(left),
            };
            let pos = self.pos();
            self.bump();
            let right = self.multiplicative()?;
            left = Node { pos, kind: Kind::BinOp(op, Box::new(left), Box::new(right)) };
        }
    }

    fn multiplicative(&mut self) -> R<Node> {
        let mut left = self.application()?;
        while *self.peek() == Tok::Star {
            let pos = self.pos();
            self.bump();
            let right = self.application()?;
            left = Node { pos, kind: Kind::BinOp(BinOp::Mul, Box::new(left), Box::new(right)) };
        }
        Ok(left)
    }

    fn starts_operand(&self) -> bool {
        match self.peek() {
            Tok::Ident(s) => !matches!(s.as_str(), "then" | "else"),
            Tok::Int(_) | Tok::LParen | Tok::Percent | Tok::Backslash => true,
            _ => false,
        }
    }

    fn application(&mut self) -> R<Node> {
        let mut head = self.prefix(true)?;
        loop {
            if matches!(self.peek(), Tok::At | Tok::AtBang) {
                head = self.instantiation(head)?;
                continue;
            }
            if !self.starts_operand() {
                break;
            }
            let pos = self.pos();
            // A trailing binder form extends to the end of the expression.
            let arg = if self.starts_binder() { self.expr()? } else { self.prefix(false)? };
            head = Node { pos, kind: Kind::App(Box::new(head), Box::new(arg)) };
        }
        Ok(head)
    }

    fn prefix(&mut self, allow_neg: bool) -> R<Node> {
        let pos = self.pos();
        let op = match self.peek().clone() {
            Tok::Percent => {
                self.bump();
                Prefix::Csp
            }
            Tok::Ident(kw) => {
                let op = match kw.as_str() {
                    "next" | "prev" | "brk" | "esc" | "open" | "close" => {
                        self.bump();
                        let v = self.opt_bracket_var()?;
                        match kw.as_str() {
                            "next" => Prefix::Next(v),
                            "prev" => Prefix::Prev(v),
                            "brk" => Prefix::Brk(v),
                            "esc" => Prefix::Esc(v),
                            "open" => Prefix::Open(v),
                            _ => Prefix::Close(v),
                        }
                    }
                    "box" => {
                        self.bump();
                        Prefix::Box
                    }
                    "run" => {
                        self.bump();
                        Prefix::Run
                    }
                    "unbox" => {
                        self.bump();
                        self.expect(Tok::LBracket)?;
                        let k = self.number()?;
                        self.expect(Tok::RBracket)?;
                        Prefix::Unbox(k)
                    }
                    _ => return self.atom(allow_neg),
                };
                op
            }
            _ => return self.atom(allow_neg),
        };
        let body = if self.starts_binder() { self.expr()? } else { self.prefix(true)? };
        Ok(Node { pos, kind: Kind::Prefix(op, Box::new(body)) })
    }

    /// `M @[a*]`, `M @ n`, `M @! a` or `M @!`, at the level of application.
    fn instantiation(&mut self, m: Node) -> R<Node> {
        let pos = self.pos();
        match self.bump() {
            Tok::At => match self.peek() {
                Tok::LBracket => {
                    let vs = self.bracket_vars()?;
                    Ok(Node { pos, kind: Kind::TApp(Box::new(m), vs) })
                }
                Tok::Int(_) => {
                    let n = self.number()?;
                    Ok(Node { pos, kind: Kind::NatApp(Box::new(m), n) })
                }
                _ => self.error("`[` or a number after `@`"),
            },
            _ => match self.peek().clone() {
                Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                    self.bump();
                    Ok(Node { pos, kind: Kind::SIns(Box::new(m), s) })
                }
                _ => Ok(Node { pos, kind: Kind::UnitApp(Box::new(m)) }),
            },
        }
    }

    fn atom(&mut self, allow_neg: bool) -> R<Node> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Kind::Int(n)
            }
            Tok::Minus if allow_neg && matches!(self.peek_at(1), Tok::Int(_)) => {
                self.bump();
                match self.bump() {
                    Tok::Int(n) => Kind::Int(-n),
                    _ => unreachable!(),
                }
            }
            Tok::Ident(s) if s == "true" => {
                self.bump();
                Kind::Bool(true)
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                Kind::Bool(false)
            }
            Tok::Ident(_) => Kind::Var(self.ident()?),
            Tok::LParen => {
                self.bump();
                let m = self.expr()?;
                self.expect(Tok::RParen)?;
                return Ok(m);
            }
            _ => return self.error("a term"),
        };
        Ok(Node { pos, kind })
    }
}

pub fn parse_document(src: &str) -> R<Document> {
    Parser::new(src)?.document()
}

pub fn parse_type(src: &str) -> R<SType> {
    let mut p = Parser::new(src)?;
    let t = p.ty()?;
    p.finish()?;
    Ok(t)
}

/// A whitespace-separated list of variables, optionally bracketed.
pub fn parse_stage(src: &str) -> R<Vec<String>> {
    let mut p = Parser::new(src)?;
    let vs = if *p.peek() == Tok::LBracket {
        p.bracket_vars()?
    } else {
        let mut out = Vec::new();
        while *p.peek() != Tok::Eof {
            out.push(p.ident()?);
        }
        out
    };
    p.finish()?;
    Ok(vs)
}
