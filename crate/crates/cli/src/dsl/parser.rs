use super::lexer::{tokenize, Tok, Token};
use super::*;

type PResult<T> = Result<T, Diagnostic>;

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

pub fn parse(text: &str) -> PResult<File> {
    let mut p = Parser {
        tokens: tokenize(text)?,
        pos: 0,
    };
    let mut decls = Vec::new();
    while !p.at_eof() {
        if p.eat(";") {
            continue;
        }
        decls.push(p.decl()?);
    }
    Ok(File { decls })
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.tokens[(self.pos + k).min(self.tokens.len() - 1)].tok
    }

    fn loc(&self) -> Loc {
        self.peek().loc
    }

    fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek().tok, Tok::Punct(q) if q == p)
    }

    fn is_keyword(&self, k: &str) -> bool {
        matches!(&self.peek().tok, Tok::Word { text, quoted: false } if text == k)
    }

    fn eat(&mut self, p: &str) -> bool {
        let hit = self.is_punct(p);
        if hit {
            self.bump();
        }
        hit
    }

    fn eat_keyword(&mut self, k: &str) -> bool {
        let hit = self.is_keyword(k);
        if hit {
            self.bump();
        }
        hit
    }

    fn describe(&self) -> String {
        match &self.peek().tok {
            Tok::Word { text, .. } => format!("'{text}'"),
            Tok::Punct(p) => format!("'{p}'"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn expected<T>(&self, what: &str) -> PResult<T> {
        Err(Diagnostic::new(
            self.loc(),
            format!("expected {what}, found {}", self.describe()),
        ))
    }

    fn expect(&mut self, p: &str) -> PResult<()> {
        if self.eat(p) {
            Ok(())
        } else {
            self.expected(&format!("'{p}'"))
        }
    }

    fn expect_keyword(&mut self, k: &str) -> PResult<()> {
        if self.eat_keyword(k) {
            Ok(())
        } else {
            self.expected(&format!("'{k}'"))
        }
    }

    fn name(&mut self) -> PResult<Name> {
        match &self.peek().tok {
            Tok::Word { text, .. } => {
                let n = Name {
                    text: text.clone(),
                    loc: self.loc(),
                };
                self.bump();
                Ok(n)
            }
            _ => self.expected("a name"),
        }
    }

    fn number(&mut self) -> PResult<usize> {
        let n = self.name()?;
        n.text
            .parse()
            .map_err(|_| Diagnostic::new(n.loc, format!("expected a number, found '{}'", n.text)))
    }

    fn names(&mut self) -> PResult<Vec<Name>> {
        let mut out = vec![self.name()?];
        while self.eat(",") {
            out.push(self.name()?);
        }
        Ok(out)
    }

    fn reference(&mut self) -> PResult<Ref> {
        if self.is_punct("(") {
            let loc = self.loc();
            self.bump();
            let mut parts = vec![self.reference()?];
            while self.eat(",") {
                parts.push(self.reference()?);
            }
            self.expect(")")?;
            Ok(Ref::Tuple(parts, loc))
        } else {
            Ok(Ref::Atom(self.name()?))
        }
    }

    fn value(&mut self) -> PResult<Value> {
        if self.is_punct("[") {
            let loc = self.loc();
            self.bump();
            let mut v = Vec::new();
            if !self.is_punct("]") {
                v.push(self.number()?);
                while self.eat(",") {
                    v.push(self.number()?);
                }
            }
            self.expect("]")?;
            Ok(Value::Array(v, loc))
        } else {
            Ok(Value::Ref(self.reference()?))
        }
    }

    fn call(&mut self) -> PResult<Call> {
        let func = self.name()?;
        let mut groups = Vec::new();
        if self.eat("(") {
            let mut group = Vec::new();
            while !self.is_punct(")") {
                if self.eat(";") {
                    groups.push(std::mem::take(&mut group));
                    continue;
                }
                group.push(self.name()?);
                if !self.is_punct(")") && !self.is_punct(";") {
                    self.expect(",")?;
                }
            }
            self.bump();
            // `f()` is the same call as `f`
            if !(groups.is_empty() && group.is_empty()) {
                groups.push(group);
            }
        }
        Ok(Call { func, groups })
    }

    /// `{ (obj|mor|at) key => value ... }`
    fn items(&mut self, allowed: &[ItemKind]) -> PResult<Vec<Item>> {
        self.expect("{")?;
        let mut out = Vec::new();
        loop {
            if self.eat(";") {
                continue;
            }
            if self.eat("}") {
                return Ok(out);
            }
            let kind = match () {
                _ if self.is_keyword("obj") => ItemKind::Obj,
                _ if self.is_keyword("mor") => ItemKind::Mor,
                _ if self.is_keyword("at") => ItemKind::At,
                _ => return self.expected("'obj', 'mor', 'at' or '}'"),
            };
            if !allowed.contains(&kind) {
                return Err(Diagnostic::new(
                    self.loc(),
                    format!("'{kind}' is not allowed here"),
                ));
            }
            self.bump();
            let key = self.reference()?;
            self.expect("=>")?;
            let value = self.value()?;
            out.push(Item { kind, key, value });
        }
    }

    fn decl(&mut self) -> PResult<Decl> {
        let kw = self.name()?;
        match kw.text.as_str() {
            "category" => self.category(),
            "group" => self.group(),
            "variance" => self.variance(),
            "functor" => self.functor(false),
            "setfunctor" => self.functor(true),
            "span" => self.span(),
            "partition" => self.partition(),
            "transformation" => self.transformation(),
            "use" => Ok(Decl::Use(self.name()?)),
            "assert" => {
                let assertion = self.assertion()?;
                Ok(Decl::Assert {
                    loc: kw.loc,
                    assertion,
                })
            }
            other => Err(Diagnostic::new(
                kw.loc,
                format!("unknown declaration '{other}'"),
            )),
        }
    }

    fn category(&mut self) -> PResult<Decl> {
        let name = self.name()?;
        if self.eat("=") {
            return Ok(Decl::Category {
                name,
                def: CategoryDef::Call(self.call()?),
            });
        }
        self.expect("{")?;
        let (mut objects, mut morphisms, mut composites) = (Vec::new(), Vec::new(), Vec::new());
        loop {
            if self.eat(";") {
                continue;
            }
            if self.eat("}") {
                break;
            }
            if self.eat_keyword("objects") {
                self.expect(":")?;
                objects.extend(self.names()?);
            } else if self.eat_keyword("mor") {
                let m = self.name()?;
                self.expect(":")?;
                let d = self.name()?;
                self.expect("->")?;
                morphisms.push((m, d, self.name()?));
            } else if self.eat_keyword("compose") {
                let g = self.name()?;
                self.expect(".")?;
                let f = self.name()?;
                self.expect("=")?;
                composites.push((g, f, self.name()?));
            } else {
                return self.expected("'objects', 'mor', 'compose' or '}'");
            }
        }
        Ok(Decl::Category {
            name,
            def: CategoryDef::Explicit {
                objects,
                morphisms,
                composites,
            },
        })
    }

    fn group(&mut self) -> PResult<Decl> {
        let name = self.name()?;
        self.expect_keyword("table")?;
        self.expect("{")?;
        let mut elements = Vec::new();
        let mut rows = Vec::new();
        loop {
            if self.eat(";") {
                continue;
            }
            if self.eat("}") {
                break;
            }
            if self.is_keyword("elements") && matches!(self.peek_at(1), Tok::Punct(":")) {
                self.bump();
                self.bump();
                elements.extend(self.names()?);
                continue;
            }
            let g = self.name()?;
            self.expect(":")?;
            rows.push((g, self.names()?));
        }
        Ok(Decl::Group {
            name,
            elements,
            rows,
        })
    }

    fn variance(&mut self) -> PResult<Decl> {
        let name = self.name()?;
        if self.eat("=") {
            return Ok(Decl::Variance {
                name,
                def: VarianceDef::Call(self.call()?),
            });
        }
        self.expect_keyword("on")?;
        let on = self.name()?;
        self.expect("{")?;
        let (mut e, mut m) = (Vec::new(), Vec::new());
        loop {
            if self.eat(";") {
                continue;
            }
            if self.eat("}") {
                break;
            }
            let list = if self.eat_keyword("E") {
                &mut e
            } else if self.eat_keyword("M") {
                &mut m
            } else {
                return self.expected("'E', 'M' or '}'");
            };
            self.expect(":")?;
            if !self.is_punct(";")
                && !self.is_punct("}")
                && !self.is_keyword("E")
                && !self.is_keyword("M")
            {
                list.extend(self.names()?);
            }
        }
        Ok(Decl::Variance {
            name,
            def: VarianceDef::Explicit { on, e, m },
        })
    }

    fn functor(&mut self, set: bool) -> PResult<Decl> {
        let name = self.name()?;
        if self.eat("=") {
            return Ok(Decl::Functor {
                name,
                set,
                def: FunctorDef::Call(self.call()?),
            });
        }
        self.expect(":")?;
        let source = self.name()?;
        self.expect("->")?;
        let target = self.name()?;
        let variance = if self.eat_keyword("variance") {
            Some(self.name()?)
        } else {
            None
        };
        let items = self.items(&[ItemKind::Obj, ItemKind::Mor])?;
        Ok(Decl::Functor {
            name,
            set,
            def: FunctorDef::Explicit {
                source,
                target,
                variance,
                items,
            },
        })
    }

    fn span(&mut self) -> PResult<Decl> {
        let name = self.name()?;
        if self.eat("=") {
            return Ok(Decl::Span {
                name,
                def: SpanDef::Call(self.call()?),
            });
        }
        self.expect(":")?;
        let apex = self.name()?;
        self.expect("=>")?;
        let a = self.name()?;
        self.expect("*")?;
        let b = self.name()?;
        let items = self.items(&[ItemKind::Obj, ItemKind::Mor])?;
        Ok(Decl::Span {
            name,
            def: SpanDef::Explicit { apex, a, b, items },
        })
    }

    fn signature(&mut self) -> PResult<(Vec<Name>, Vec<Name>)> {
        self.expect("(")?;
        let domain = self.names()?;
        self.expect(";")?;
        let codomain = self.names()?;
        self.expect(")")?;
        Ok((domain, codomain))
    }

    fn classes(&mut self) -> PResult<Vec<Vec<Name>>> {
        let mut out = Vec::new();
        while self.eat("{") {
            out.push(self.names()?);
            self.expect("}")?;
        }
        if out.is_empty() {
            return self.expected("'{'");
        }
        Ok(out)
    }

    fn partition(&mut self) -> PResult<Decl> {
        let name = self.name()?;
        self.expect_keyword("over")?;
        let (domain, codomain) = self.signature()?;
        let def = if self.eat("=") {
            match &self.peek().tok {
                Tok::Word { quoted: true, .. } => PartitionDef::Expr(self.name()?),
                _ => return self.expected("a quoted expression"),
            }
        } else {
            self.expect("{")?;
            let c = self.classes()?;
            self.expect("}")?;
            PartitionDef::Classes(c)
        };
        Ok(Decl::Partition {
            name,
            domain,
            codomain,
            def,
        })
    }

    fn transformation(&mut self) -> PResult<Decl> {
        let name = self.name()?;
        self.expect(":")?;
        let f = self.name()?;
        self.expect("=>")?;
        let g = self.name()?;
        self.expect_keyword("along")?;
        let span = self.name()?;
        let items = self.items(&[ItemKind::At])?;
        Ok(Decl::Transformation {
            name,
            f,
            g,
            span,
            items,
        })
    }

    fn assertion(&mut self) -> PResult<Assertion> {
        let negated = self.eat_keyword("not");
        let kw = self.name()?;
        let a = match kw.text.as_str() {
            "natural" => Assertion::Natural {
                negated,
                t: self.name()?,
            },
            "extranatural" => {
                let p = self.name()?;
                let (domain, codomain) = self.signature()?;
                Assertion::Extranatural {
                    negated,
                    p,
                    domain,
                    codomain,
                }
            }
            _ if negated => {
                return Err(Diagnostic::new(
                    kw.loc,
                    "only 'natural' and 'extranatural' can be negated",
                ))
            }
            "mutants" => Assertion::Mutants { t: self.name()? },
            "end" | "coend" => {
                let f = self.name()?;
                self.expect_keyword("along")?;
                let span = self.name()?;
                self.expect_keyword("size")?;
                Assertion::End {
                    coend: kw.text == "coend",
                    f,
                    span,
                    size: self.name()?,
                }
            }
            "fubini" => {
                let f = self.name()?;
                self.expect_keyword("along")?;
                let s1 = self.name()?;
                self.expect(",")?;
                let s2 = self.name()?;
                self.expect_keyword("size")?;
                Assertion::Fubini {
                    f,
                    s1,
                    s2,
                    size: self.name()?,
                }
            }
            "classes" => {
                let p = self.name()?;
                self.expect("=")?;
                Assertion::Classes {
                    p,
                    classes: self.classes()?,
                }
            }
            "variances" => {
                let c = self.name()?;
                self.expect_keyword("count")?;
                Assertion::Variances {
                    c,
                    count: self.name()?,
                }
            }
            "sections" => {
                let f = self.name()?;
                self.expect(",")?;
                let g = self.name()?;
                self.expect_keyword("along")?;
                let span = self.name()?;
                self.expect_keyword("count")?;
                Assertion::Sections {
                    f,
                    g,
                    span,
                    count: self.name()?,
                }
            }
            other => {
                return Err(Diagnostic::new(
                    kw.loc,
                    format!("unknown assertion '{other}'"),
                ))
            }
        };
        Ok(a)
    }
}
