//! Surface and meta-level printing.

use std::fmt::Write;

use crate::sort::SortRef;
use crate::subst::Substitution;
use crate::term::{Term, Var};
use crate::theory::{Syntax, Theory};

impl Theory {
    pub fn show_sort(&self, s: SortRef) -> String {
        self.sorts.display(s).to_string()
    }

    pub fn show_var(&self, v: &Var) -> String {
        format!("{}:{}", v.label(), self.show_sort(v.sort))
    }

    /// Mixfix rendering with sort-annotated variables, e.g. `#1:[NatSet] * mt`.
    pub fn show(&self, t: &Term) -> String {
        let mut out = String::new();
        self.write_term(t, &mut out);
        out
    }

    fn write_term(&self, t: &Term, out: &mut String) {
        match t {
            Term::Var(v) => out.push_str(&self.show_var(v)),
            Term::App(f, args) => {
                let fam = self.op(*f);
                match &fam.syntax {
                    Syntax::Constant => out.push_str(&fam.name),
                    Syntax::Prefix => {
                        out.push_str(&fam.name);
                        out.push('(');
                        for (i, a) in args.iter().enumerate() {
                            if i > 0 {
                                out.push_str(", ");
                            }
                            self.write_term(a, out);
                        }
                        out.push(')');
                    }
                    Syntax::Infix(tok) => {
                        for (i, a) in args.iter().enumerate() {
                            if i > 0 {
                                out.push(' ');
                                out.push_str(tok);
                                out.push(' ');
                            }
                            let paren = matches!(a, Term::App(g, _) if matches!(self.op(*g).syntax, Syntax::Infix(_)));
                            if paren {
                                out.push('(');
                            }
                            self.write_term(a, out);
                            if paren {
                                out.push(')');
                            }
                        }
                    }
                }
            }
        }
    }

    /// Meta-level rendering: quoted operator names applied to bracketed
    /// argument lists, constants as `'c.Sort`, variables as `'X:Sort`.
    pub fn show_meta(&self, t: &Term) -> String {
        match t {
            Term::Var(v) => format!("'{}", self.show_var(v)),
            Term::App(f, args) if args.is_empty() => {
                format!("'{}.{}", self.op(*f).name, self.show_sort(self.least_sort(t)))
            }
            Term::App(f, args) => {
                let mut out = format!("'{}[", self.op(*f).name);
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&self.show_meta(a));
                }
                out.push(']');
                out
            }
        }
    }

    /// `X --> t` lines, one per binding.
    pub fn show_subst(&self, s: &Substitution) -> String {
        let mut out = String::new();
        for (v, t) in s.iter() {
            let _ = writeln!(out, "{} --> {}", v.label(), self.show(t));
        }
        out
    }

    /// Meta-level substitution: `'X:Nat <- 's['0.Nat] ; ...`, or `none`.
    pub fn show_subst_meta(&self, s: &Substitution) -> String {
        if s.is_empty() {
            return "none".to_string();
        }
        s.iter()
            .map(|(v, t)| format!("'{} <- {}", self.show_var(v), self.show_meta(t)))
            .collect::<Vec<_>>()
            .join(" ; ")
    }
}
