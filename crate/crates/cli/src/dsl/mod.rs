//! The `.catv` declaration language: tokens, syntax tree, parser and a
//! printer whose output parses back to an equal tree.

mod lexer;
mod parser;

use std::fmt;

pub use parser::parse;

/// 1-based source position. Locations never distinguish two trees, so a
/// reprinted file compares equal to the original.
#[derive(Clone, Copy, Debug, Default)]
pub struct Loc {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Loc {
    fn eq(&self, _: &Loc) -> bool {
        true
    }
}

impl Eq for Loc {}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub loc: Loc,
    pub message: String,
}

impl Diagnostic {
    pub fn new(loc: Loc, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            loc,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.loc, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Name {
    pub text: String,
    pub loc: Loc,
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if lexer::is_bare_word(&self.text) {
            write!(f, "{}", self.text)
        } else {
            write!(f, "\"{}\"", self.text)
        }
    }
}

/// An object or morphism reference: a label, or a tuple of references into
/// a product category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ref {
    Atom(Name),
    Tuple(Vec<Ref>, Loc),
}

impl Ref {
    pub fn loc(&self) -> Loc {
        match self {
            Ref::Atom(n) => n.loc,
            Ref::Tuple(_, loc) => *loc,
        }
    }

    /// The label this reference denotes, `(a,b)` for tuples.
    pub fn label(&self) -> String {
        match self {
            Ref::Atom(n) => n.text.clone(),
            Ref::Tuple(parts, _) => {
                let inner: Vec<String> = parts.iter().map(Ref::label).collect();
                format!("({})", inner.join(","))
            }
        }
    }
}

impl fmt::Display for Ref {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ref::Atom(n) => write!(f, "{n}"),
            Ref::Tuple(parts, _) => write!(f, "({})", join(parts, ", ")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Ref(Ref),
    /// `[i0, i1, ...]`: the function `j |-> i_j`
    Array(Vec<usize>, Loc),
}

impl Value {
    pub fn loc(&self) -> Loc {
        match self {
            Value::Ref(r) => r.loc(),
            Value::Array(_, loc) => *loc,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Ref(r) => write!(f, "{r}"),
            Value::Array(v, _) => write!(f, "[{}]", join(v, ",")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ItemKind {
    Obj,
    Mor,
    At,
}

impl fmt::Display for ItemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ItemKind::Obj => "obj",
            ItemKind::Mor => "mor",
            ItemKind::At => "at",
        })
    }
}

/// `obj a => x`, `mor u => [0,2,1]`, `at r => alpha`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Item {
    pub kind: ItemKind,
    pub key: Ref,
    pub value: Value,
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} => {}", self.kind, self.key, self.value)
    }
}

/// A built-in constructor such as `symmetric(4)` or `index(C, C; 1, 0)`.
/// Arguments come in `;`-separated groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Call {
    pub func: Name,
    pub groups: Vec<Vec<Name>>,
}

impl fmt::Display for Call {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let groups: Vec<String> = self.groups.iter().map(|g| join(g, ", ")).collect();
        write!(f, "{}({})", self.func, groups.join("; "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CategoryDef {
    Explicit {
        objects: Vec<Name>,
        /// `(label, dom, cod)`
        morphisms: Vec<(Name, Name, Name)>,
        /// `(g, f, g . f)`
        composites: Vec<(Name, Name, Name)>,
    },
    Call(Call),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarianceDef {
    /// `E` and `M` are given by generators.
    Explicit {
        on: Name,
        e: Vec<Name>,
        m: Vec<Name>,
    },
    Call(Call),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctorDef {
    Explicit {
        source: Name,
        target: Name,
        variance: Option<Name>,
        items: Vec<Item>,
    },
    Call(Call),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpanDef {
    Explicit {
        apex: Name,
        a: Name,
        b: Name,
        items: Vec<Item>,
    },
    Call(Call),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionDef {
    Classes(Vec<Vec<Name>>),
    Expr(Name),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Assertion {
    Natural {
        negated: bool,
        t: Name,
    },
    /// every single-value change of `t` is caught
    Mutants {
        t: Name,
    },
    End {
        coend: bool,
        f: Name,
        span: Name,
        size: Name,
    },
    Fubini {
        f: Name,
        s1: Name,
        s2: Name,
        size: Name,
    },
    Extranatural {
        negated: bool,
        p: Name,
        domain: Vec<Name>,
        codomain: Vec<Name>,
    },
    Classes {
        p: Name,
        classes: Vec<Vec<Name>>,
    },
    Variances {
        c: Name,
        count: Name,
    },
    Sections {
        f: Name,
        g: Name,
        span: Name,
        count: Name,
    },
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let not = |b: &bool| if *b { "not " } else { "" };
        match self {
            Assertion::Natural { negated, t } => write!(f, "{}natural {t}", not(negated)),
            Assertion::Mutants { t } => write!(f, "mutants {t}"),
            Assertion::End {
                coend,
                f: func,
                span,
                size,
            } => {
                let kw = if *coend { "coend" } else { "end" };
                write!(f, "{kw} {func} along {span} size {size}")
            }
            Assertion::Fubini {
                f: func,
                s1,
                s2,
                size,
            } => write!(f, "fubini {func} along {s1}, {s2} size {size}"),
            Assertion::Extranatural {
                negated,
                p,
                domain,
                codomain,
            } => write!(
                f,
                "{}extranatural {p} ({} ; {})",
                not(negated),
                join(domain, ", "),
                join(codomain, ", ")
            ),
            Assertion::Classes { p, classes } => {
                write!(f, "classes {p} = {}", print_classes(classes))
            }
            Assertion::Variances { c, count } => write!(f, "variances {c} count {count}"),
            Assertion::Sections {
                f: func,
                g,
                span,
                count,
            } => write!(f, "sections {func}, {g} along {span} count {count}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decl {
    Category {
        name: Name,
        def: CategoryDef,
    },
    Group {
        name: Name,
        elements: Vec<Name>,
        rows: Vec<(Name, Vec<Name>)>,
    },
    Variance {
        name: Name,
        def: VarianceDef,
    },
    /// `set` for `setfunctor`
    Functor {
        name: Name,
        set: bool,
        def: FunctorDef,
    },
    Span {
        name: Name,
        def: SpanDef,
    },
    Partition {
        name: Name,
        domain: Vec<Name>,
        codomain: Vec<Name>,
        def: PartitionDef,
    },
    Transformation {
        name: Name,
        f: Name,
        g: Name,
        span: Name,
        items: Vec<Item>,
    },
    Use(Name),
    Assert {
        loc: Loc,
        assertion: Assertion,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct File {
    pub decls: Vec<Decl>,
}

fn join<T: fmt::Display>(items: &[T], sep: &str) -> String {
    items
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

fn print_classes(classes: &[Vec<Name>]) -> String {
    classes
        .iter()
        .map(|c| format!("{{{}}}", join(c, ",")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn items_block(f: &mut fmt::Formatter<'_>, items: &[Item]) -> fmt::Result {
    writeln!(f, " {{")?;
    for i in items {
        writeln!(f, "  {i}")?;
    }
    write!(f, "}}")
}

impl fmt::Display for Decl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decl::Category { name, def } => match def {
                CategoryDef::Call(c) => write!(f, "category {name} = {c}"),
                CategoryDef::Explicit {
                    objects,
                    morphisms,
                    composites,
                } => {
                    writeln!(f, "category {name} {{")?;
                    writeln!(f, "  objects: {}", join(objects, ", "))?;
                    for (m, d, c) in morphisms {
                        writeln!(f, "  mor {m}: {d} -> {c}")?;
                    }
                    for (g, h, gh) in composites {
                        writeln!(f, "  compose {g} . {h} = {gh}")?;
                    }
                    write!(f, "}}")
                }
            },
            Decl::Group {
                name,
                elements,
                rows,
            } => {
                writeln!(f, "group {name} table {{")?;
                writeln!(f, "  elements: {}", join(elements, ", "))?;
                for (g, row) in rows {
                    writeln!(f, "  {g}: {}", join(row, ", "))?;
                }
                write!(f, "}}")
            }
            Decl::Variance { name, def } => match def {
                VarianceDef::Call(c) => write!(f, "variance {name} = {c}"),
                VarianceDef::Explicit { on, e, m } => {
                    writeln!(f, "variance {name} on {on} {{")?;
                    writeln!(f, "  E: {}", join(e, ", "))?;
                    writeln!(f, "  M: {}", join(m, ", "))?;
                    write!(f, "}}")
                }
            },
            Decl::Functor { name, set, def } => {
                let kw = if *set { "setfunctor" } else { "functor" };
                match def {
                    FunctorDef::Call(c) => write!(f, "{kw} {name} = {c}"),
                    FunctorDef::Explicit {
                        source,
                        target,
                        variance,
                        items,
                    } => {
                        write!(f, "{kw} {name} : {source} -> {target}")?;
                        if let Some(v) = variance {
                            write!(f, " variance {v}")?;
                        }
                        items_block(f, items)
                    }
                }
            }
            Decl::Span { name, def } => match def {
                SpanDef::Call(c) => write!(f, "span {name} = {c}"),
                SpanDef::Explicit { apex, a, b, items } => {
                    write!(f, "span {name} : {apex} => {a} * {b}")?;
                    items_block(f, items)
                }
            },
            Decl::Partition {
                name,
                domain,
                codomain,
                def,
            } => {
                write!(
                    f,
                    "partition {name} over ({} ; {})",
                    join(domain, ", "),
                    join(codomain, ", ")
                )?;
                match def {
                    PartitionDef::Classes(c) => write!(f, " {{ {} }}", print_classes(c)),
                    PartitionDef::Expr(e) => write!(f, " = \"{}\"", e.text),
                }
            }
            Decl::Transformation {
                name,
                f: func,
                g,
                span,
                items,
            } => {
                write!(f, "transformation {name} : {func} => {g} along {span}")?;
                items_block(f, items)
            }
            Decl::Use(n) => write!(f, "use {n}"),
            Decl::Assert { assertion, .. } => write!(f, "assert {assertion}"),
        }
    }
}

impl fmt::Display for File {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.decls {
            writeln!(f, "{d}")?;
        }
        Ok(())
    }
}
