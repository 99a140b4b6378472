//! Name resolution, type checking and denotation of programs.

use std::collections::{BTreeMap, BTreeSet};

use super::document::{
    Document, ExplicitDecl, FamilyDecl, KernelBody, KernelDecl, LevelDecl, ObjectDecl, UNIT,
};
use super::term::{self, Term, TermKind, KEYWORDS};
use crate::error::{Error, Result};
use crate::finker::FinKernel;
use crate::proker::{self, Level, ProKernel, ProState};
use crate::rational::{self, Rational};
use crate::stone::{self, InverseSystem};

/// A resolved program: every object is a system, every kernel a validated
/// pro-kernel and every term type-checks.
#[derive(Debug, Clone)]
pub struct Program {
    document: Document,
    objects: BTreeMap<String, InverseSystem>,
    kernels: BTreeMap<String, ProKernel>,
    terms: BTreeMap<String, Term>,
}

impl Program {
    pub fn parse(src: &str) -> Result<Program> {
        Program::from_document(Document::parse(src)?)
    }

    pub fn from_document(document: Document) -> Result<Program> {
        check_names(&document)?;
        let mut objects = BTreeMap::from([(UNIT.to_string(), InverseSystem::unit())]);
        for name in document.objects.keys() {
            resolve_object(&document, name, &mut objects, &mut Vec::new())?;
        }
        let mut program = Program {
            objects,
            kernels: BTreeMap::new(),
            terms: BTreeMap::new(),
            document,
        };
        for (name, decl) in &program.document.kernels {
            let k = program
                .build_kernel(decl)
                .map_err(|e| in_declaration("kernel", name, e))?;
            program.kernels.insert(name.clone(), k);
        }
        for (name, src) in &program.document.terms {
            let t = term::parse_term(src).map_err(|e| in_declaration("term", name, e))?;
            program.terms.insert(name.clone(), t);
        }
        for name in program.terms.keys() {
            program
                .type_of_name(name, 0, &mut Vec::new())
                .map_err(|e| in_declaration("term", name, e))?;
        }
        Ok(program)
    }

    pub fn document(&self) -> &Document {
        &self.document
    }

    pub fn object(&self, name: &str) -> Result<&InverseSystem> {
        self.objects.get(name).ok_or_else(|| Error::UnknownName {
            name: name.into(),
            pos: 0,
        })
    }

    pub fn objects(&self) -> &BTreeMap<String, InverseSystem> {
        &self.objects
    }

    /// A declared term by name, or else `text` parsed as a term.
    pub fn term(&self, text: &str) -> Result<Term> {
        match self.terms.get(text.trim()) {
            Some(t) => Ok(t.clone()),
            None => term::parse_term(text),
        }
    }

    /// Domain and codomain of a term.
    pub fn type_of(&self, t: &Term) -> Result<(InverseSystem, InverseSystem)> {
        self.infer(t, &mut Vec::new())
    }

    /// The pro-kernel a term denotes, after type checking.
    pub fn denote(&self, t: &Term) -> Result<ProKernel> {
        self.type_of(t)?;
        self.denote_checked(t)
    }

    /// Denotation of a declared term name or term text.
    pub fn lookup(&self, text: &str) -> Result<ProKernel> {
        self.denote(&self.term(text)?)
    }

    /// The level-`depth` kernel of a term, with the domain level it reads.
    pub fn eval(&self, text: &str, depth: usize) -> Result<Level> {
        self.lookup(text)?.level(depth)
    }

    fn obj(&self, name: &str, pos: usize) -> Result<InverseSystem> {
        self.objects
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownName {
                name: name.into(),
                pos,
            })
    }

    fn type_of_name(
        &self,
        name: &str,
        pos: usize,
        stack: &mut Vec<String>,
    ) -> Result<(InverseSystem, InverseSystem)> {
        if let Some(k) = self.kernels.get(name) {
            return Ok((k.dom().clone(), k.cod().clone()));
        }
        let t = self.terms.get(name).ok_or_else(|| Error::UnknownName {
            name: name.into(),
            pos,
        })?;
        if stack.iter().any(|s| s == name) {
            return Err(Error::validation(format!("term {name} refers to itself")));
        }
        stack.push(name.into());
        let ty = self.infer(t, stack);
        stack.pop();
        ty
    }

    fn infer(&self, t: &Term, stack: &mut Vec<String>) -> Result<(InverseSystem, InverseSystem)> {
        let p = t.pos;
        Ok(match &t.kind {
            TermKind::Name(n) => self.type_of_name(n, p, stack)?,
            TermKind::Id(x) => {
                let x = self.obj(x, p)?;
                (x.clone(), x)
            }
            TermKind::Copy(x) => {
                let x = self.obj(x, p)?;
                (x.clone(), InverseSystem::pair(&x, &x))
            }
            TermKind::Discard(x) => (self.obj(x, p)?, InverseSystem::unit()),
            TermKind::Swap(x, y) => {
                let (x, y) = (self.obj(x, p)?, self.obj(y, p)?);
                (InverseSystem::pair(&x, &y), InverseSystem::pair(&y, &x))
            }
            TermKind::Seq(a, b) => {
                let (a_dom, a_cod) = self.infer(a, stack)?;
                let (b_dom, b_cod) = self.infer(b, stack)?;
                if a_cod != b_dom {
                    return Err(Error::TypeMismatch {
                        pos: b.pos,
                        msg: format!("`{a}` ends in {a_cod} but `{b}` starts from {b_dom}"),
                    });
                }
                (a_dom, b_cod)
            }
            TermKind::Par(a, b) => {
                let (a_dom, a_cod) = self.infer(a, stack)?;
                let (b_dom, b_cod) = self.infer(b, stack)?;
                (
                    InverseSystem::pair(&a_dom, &b_dom),
                    InverseSystem::pair(&a_cod, &b_cod),
                )
            }
        })
    }

    fn denote_checked(&self, t: &Term) -> Result<ProKernel> {
        let p = t.pos;
        Ok(match &t.kind {
            TermKind::Name(n) => match self.kernels.get(n) {
                Some(k) => k.clone(),
                None => self.denote_checked(&self.terms[n])?,
            },
            TermKind::Id(x) => ProKernel::identity(&self.obj(x, p)?),
            TermKind::Copy(x) => ProKernel::copy(&self.obj(x, p)?),
            TermKind::Discard(x) => ProKernel::discard(&self.obj(x, p)?),
            TermKind::Swap(x, y) => ProKernel::swap(&self.obj(x, p)?, &self.obj(y, p)?),
            TermKind::Seq(a, b) => self.denote_checked(a)?.then(&self.denote_checked(b)?)?,
            TermKind::Par(a, b) => self.denote_checked(a)?.tensor(&self.denote_checked(b)?),
        })
    }

    fn build_kernel(&self, decl: &KernelDecl) -> Result<ProKernel> {
        let dom = self.obj(&decl.dom, 0)?;
        let cod = self.obj(&decl.cod, 0)?;
        match &decl.body {
            KernelBody::Matrix(rows) => {
                let (Some(n), Some(m)) = (dom.constant_size(), cod.constant_size()) else {
                    return Err(Error::validation(
                        "a matrix kernel needs finite domain and codomain; use levels",
                    ));
                };
                let k = matrix(rows, m)?;
                if k.dom() != n {
                    return Err(Error::dimension(format!(
                        "{} rows, domain has {n}",
                        k.dom()
                    )));
                }
                let level = Level::new(0, k);
                Ok(ProKernel::from_fn(dom, cod, move |_| Ok(level.clone())))
            }
            KernelBody::Levels(levels) => {
                let mut table = Vec::with_capacity(levels.len());
                for (j, l) in levels.iter().enumerate() {
                    table.push((l.dom_level, matrix(&l.matrix, cod.level_size(j)?)?));
                }
                ProKernel::from_levels(dom, cod, table)
            }
            KernelBody::Coin(bias) => {
                require_unit(&dom)?;
                iid_coin(&cod, &rational::parse(bias)?)
            }
            KernelBody::Point(e) => {
                require_unit(&dom)?;
                if *e >= cod.level_size(0)? {
                    return Err(Error::validation(format!(
                        "point {e} is not in level 0 of {cod}"
                    )));
                }
                Ok(ProKernel::point(stone::least_thread(&cod, *e)?))
            }
        }
    }

    /// A document declaring `kernel` under `name` as a level table for
    /// levels `0..=depth`, reusing this program's objects and adding any
    /// objects its systems need.
    pub fn export_kernel(&self, name: &str, kernel: &ProKernel, depth: usize) -> Result<Document> {
        let mut doc = Document {
            objects: self.document.objects.clone(),
            ..Document::default()
        };
        let mut known: Vec<(InverseSystem, String)> = self
            .objects
            .iter()
            .map(|(n, s)| (s.clone(), n.clone()))
            .collect();
        let dom = describe(kernel.dom(), &mut doc, &mut known, depth)?;
        let cod = describe(kernel.cod(), &mut doc, &mut known, depth)?;
        let mut levels = Vec::with_capacity(depth + 1);
        for j in 0..=depth {
            let level = kernel.level(j)?;
            let matrix = level
                .kernel
                .rows()
                .map(|r| r.iter().map(rational::format).collect())
                .collect();
            levels.push(LevelDecl {
                dom_level: level.dom_level,
                matrix,
            });
        }
        doc.kernels.insert(
            name.into(),
            KernelDecl {
                dom,
                cod,
                body: KernelBody::Levels(levels),
            },
        );
        Ok(doc)
    }
}

fn in_declaration(what: &str, name: &str, e: Error) -> Error {
    match e {
        Error::Validation(m) => Error::Validation(format!("{what} {name}: {m}")),
        Error::Dimension(m) => Error::Dimension(format!("{what} {name}: {m}")),
        Error::TypeMismatch { pos, msg } => Error::TypeMismatch {
            pos,
            msg: format!("{what} {name}: {msg}"),
        },
        Error::Syntax { pos, msg } => Error::Syntax {
            pos,
            msg: format!("{what} {name}: {msg}"),
        },
        Error::Lex { pos, msg } => Error::Lex {
            pos,
            msg: format!("{what} {name}: {msg}"),
        },
        other => other,
    }
}

fn check_names(doc: &Document) -> Result<()> {
    let names = doc
        .objects
        .keys()
        .map(|n| ("object", n))
        .chain(doc.kernels.keys().map(|n| ("kernel", n)))
        .chain(doc.terms.keys().map(|n| ("term", n)));
    for (what, name) in names {
        if !term::is_identifier(name) || KEYWORDS.contains(&name.as_str()) {
            return Err(Error::validation(format!(
                "{what} name {name:?} is not usable"
            )));
        }
    }
    if doc.objects.contains_key(UNIT) {
        return Err(Error::validation("the object name `unit` is reserved"));
    }
    if let Some(n) = doc.kernels.keys().find(|n| doc.terms.contains_key(*n)) {
        return Err(Error::validation(format!(
            "{n} is both a kernel and a term"
        )));
    }
    Ok(())
}

fn resolve_object(
    doc: &Document,
    name: &str,
    done: &mut BTreeMap<String, InverseSystem>,
    stack: &mut Vec<String>,
) -> Result<InverseSystem> {
    if let Some(s) = done.get(name) {
        return Ok(s.clone());
    }
    let decl = doc.objects.get(name).ok_or_else(|| Error::UnknownName {
        name: name.into(),
        pos: 0,
    })?;
    if stack.iter().any(|s| s == name) {
        return Err(Error::validation(format!(
            "object {name} is defined in terms of itself"
        )));
    }
    stack.push(name.into());
    let mut factors = |names: &[String]| -> Result<Vec<InverseSystem>> {
        names
            .iter()
            .map(|f| resolve_object(doc, f, done, stack))
            .collect()
    };
    let sys = match decl {
        ObjectDecl::Finite(n) | ObjectDecl::Family(FamilyDecl::Constant { size: n }) => {
            InverseSystem::constant(*n)
        }
        ObjectDecl::Family(FamilyDecl::BinaryPrefix) => InverseSystem::binary_prefix(),
        ObjectDecl::Family(FamilyDecl::Product { factors: fs }) => {
            InverseSystem::product(factors(fs)?)
        }
        ObjectDecl::Family(FamilyDecl::CountableProduct { factors: fs }) => {
            InverseSystem::countable_product(factors(fs)?)
                .map_err(|e| in_declaration("object", name, e))?
        }
        ObjectDecl::Explicit(ExplicitDecl { sizes, connects }) => {
            InverseSystem::explicit(sizes.clone(), connects.clone())
                .map_err(|e| in_declaration("object", name, e))?
        }
    };
    stack.pop();
    done.insert(name.into(), sys.clone());
    Ok(sys)
}

fn matrix(rows: &[Vec<String>], cod: usize) -> Result<FinKernel> {
    let rows = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|e| rational::parse(e))
                .collect::<Result<Vec<Rational>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    FinKernel::from_rows(cod, rows)
}

fn require_unit(dom: &InverseSystem) -> Result<()> {
    if dom.constant_size() == Some(1) {
        Ok(())
    } else {
        Err(Error::validation("a built-in state has domain unit"))
    }
}

/// Independent coins with the given bias on every two-element coordinate
/// of `sys`: `constant(2)`, `binary_prefix`, and finite or countable
/// products of those.
pub fn iid_coin(sys: &InverseSystem, bias: &Rational) -> Result<ProState> {
    if sys.constant_size() == Some(2) && sys.factors().len() == 1 {
        return ProKernel::coin(bias.clone());
    }
    if sys.is_binary_prefix() {
        return ProKernel::coin_stream(bias.clone());
    }
    if let Some(family) = sys.countable_family() {
        let states = family
            .iter()
            .map(|f| iid_coin(f, bias))
            .collect::<Result<Vec<_>>>()?;
        return proker::infinite_tensor_states(&states);
    }
    let factors = sys.factors();
    if factors.len() > 1 {
        let states = factors
            .iter()
            .map(|f| iid_coin(f, bias))
            .collect::<Result<Vec<_>>>()?;
        return proker::tensor_states(&states);
    }
    Err(Error::validation(format!("no coin state on {sys}")))
}

/// A name for `sys` in `doc`, declaring it (and its factors) if needed.
fn describe(
    sys: &InverseSystem,
    doc: &mut Document,
    known: &mut Vec<(InverseSystem, String)>,
    depth: usize,
) -> Result<String> {
    if let Some((_, n)) = known.iter().find(|(s, _)| s == sys) {
        return Ok(n.clone());
    }
    let factor_names = |fs: &[InverseSystem], doc: &mut Document, known: &mut Vec<_>| {
        fs.iter()
            .map(|f| describe(f, doc, known, depth))
            .collect::<Result<Vec<String>>>()
    };
    let (base, decl) = if let Some(family) = sys.countable_family() {
        let fs = factor_names(family, doc, known)?;
        (
            format!("prod_{}", fs.join("_")),
            FamilyDecl::CountableProduct { factors: fs }.into(),
        )
    } else if sys.factors().len() > 1 {
        let fs = factor_names(&sys.factors(), doc, known)?;
        (fs.join("_x_"), FamilyDecl::Product { factors: fs }.into())
    } else if sys.is_binary_prefix() {
        ("bits".to_string(), FamilyDecl::BinaryPrefix.into())
    } else if let Some(n) = sys.constant_size() {
        (format!("fin{n}"), ObjectDecl::Finite(n))
    } else {
        let (sizes, connects) = sys.tables(sys.depth_limit().unwrap_or(depth))?;
        (
            "tables".to_string(),
            ObjectDecl::Explicit(ExplicitDecl { sizes, connects }),
        )
    };
    let taken: BTreeSet<&String> = doc.objects.keys().chain(doc.kernels.keys()).collect();
    let name = (0..)
        .map(|i| {
            if i == 0 {
                base.clone()
            } else {
                format!("{base}_{i}")
            }
        })
        .find(|n| !taken.contains(n) && n != UNIT)
        .expect("unbounded");
    doc.objects.insert(name.clone(), decl);
    known.push((sys.clone(), name.clone()));
    Ok(name)
}

impl From<FamilyDecl> for ObjectDecl {
    fn from(f: FamilyDecl) -> Self {
        ObjectDecl::Family(f)
    }
}
