use cognate::eval::eval_closed;
use cognate::eval::foreign::ForeignRegistry;
use cognate::lang::{erase, validate, ConstructorSig, Continuation, Eliminator, Expr, PlainTerm};
use cognate::surface::{self, ast::Item, check_clauses, ClauseProblem, SurfaceErrorKind};

fn clauses(src: &str) -> Vec<surface::ast::Clause> {
    let p = surface::parse(&format!("{src}\n0")).unwrap();
    let Item::Defs(defs) = &p.items[0] else {
        panic!("expected definitions")
    };
    defs[0].clauses.clone()
}

const BAZ: &str = "def baz (Cons y ys) x = x : y : ys;\ndef baz Nil x = [x];";
const FOO: &str = "def foo (Cons y ys) (Cons z zs) = 1;\ndef foo x Nil = 2;";
const BAR: &str = "def bar x y = x;\ndef bar y x = y;";

#[test]
fn baz_is_accepted() {
    let sig = ConstructorSig::default();
    assert_eq!(check_clauses(&clauses(BAZ), &sig), Ok(()));
    let e = surface::compile(&format!("{BAZ}\nbaz")).unwrap();
    let Expr::LetRec(defs, _) = e else { panic!() };
    let elim = defs.get("baz").unwrap();
    // Both branches go on to bind the second argument as `x`.
    let Eliminator::Constr(branches) = &**elim else {
        panic!("{elim}")
    };
    assert_eq!(branches.len(), 2);
    for k in branches.values() {
        let mut k = k;
        while let Continuation::Elim(s) = k {
            match &**s {
                Eliminator::Var(_, next) => k = next,
                other => panic!("{other}"),
            }
        }
        let Continuation::Term(body) = k else {
            unreachable!()
        };
        let Expr::Function(inner) = body.unlocated() else {
            panic!("{body}")
        };
        assert!(matches!(&**inner, Eliminator::Var(x, _) if &**x == "x"));
    }
}

#[test]
fn baz_evaluates() {
    let run = |arg: &str| {
        let e = surface::compile(&format!("{BAZ}\nbaz {arg} 0")).unwrap();
        eval_closed(&e).unwrap().0
    };
    assert_eq!(erase(&run("[1, 2]")).to_string(), "[0, 1, 2]");
    assert_eq!(erase(&run("[]")).to_string(), "[0]");
}

#[test]
fn foo_and_bar_are_rejected() {
    let sig = ConstructorSig::default();
    let foo = check_clauses(&clauses(FOO), &sig).unwrap_err();
    assert_eq!(foo[0].column, 1);
    assert_eq!(foo[0].clauses, vec![1, 2]);
    assert!(matches!(foo[0].problem, ClauseProblem::Misaligned(_)));

    let bar = check_clauses(&clauses(BAR), &sig).unwrap_err();
    assert_eq!(bar[0].column, 1);
    assert!(matches!(&bar[0].problem, ClauseProblem::VariableNames(n) if n == &["x", "y"]));

    let err = surface::compile(&format!("{FOO}\nfoo")).unwrap_err();
    assert!(matches!(err.kind, SurfaceErrorKind::Clause(_)));
    assert!(err.to_string().starts_with("1:1: foo, column 1"), "{err}");
}

#[test]
fn desugaring_is_deterministic() {
    let src = include_str!("../../../programs/mavg.cog");
    let a = surface::compile(src).unwrap();
    let b = surface::compile(src).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_string(), b.to_string());
}

const PHRASINGS: &[(&str, &str, &str, &[&str])] = &[
    (
        "length",
        include_str!("../../../programs/phrasings/length.piecewise.cog"),
        include_str!("../../../programs/phrasings/length.match.cog"),
        &["[]", "[1]", "[1, 2, 3]"],
    ),
    (
        "append",
        include_str!("../../../programs/phrasings/append.piecewise.cog"),
        include_str!("../../../programs/phrasings/append.match.cog"),
        &["[] [1]", "[1, 2] []", "[1] [2, 3]"],
    ),
    (
        "zip",
        include_str!("../../../programs/phrasings/zip.piecewise.cog"),
        include_str!("../../../programs/phrasings/zip.match.cog"),
        &["[] [1]", "[1, 2] [\"a\"]", "[1, 2] [3, 4]"],
    ),
    (
        "take",
        include_str!("../../../programs/phrasings/take.piecewise.cog"),
        include_str!("../../../programs/phrasings/take.match.cog"),
        &["0 [1, 2]", "2 [1, 2, 3]", "5 [1]"],
    ),
    (
        "insert",
        include_str!("../../../programs/phrasings/insert.piecewise.cog"),
        include_str!("../../../programs/phrasings/insert.match.cog"),
        &["3 []", "3 [1, 2, 4, 5]", "0 [1]", "9.5 [1, 2]"],
    ),
];

fn eval_plain(src: &str) -> PlainTerm {
    let e = surface::compile(src).unwrap_or_else(|e| panic!("{e}\n{src}"));
    erase(&eval_closed(&e).unwrap_or_else(|e| panic!("{e}\n{src}")).0)
}

#[test]
fn piecewise_and_match_phrasings_agree() {
    for (f, piecewise, explicit, inputs) in PHRASINGS {
        for args in *inputs {
            let a = eval_plain(&format!("{piecewise}\n{f} {args}"));
            let b = eval_plain(&format!("{explicit}\n{f} {args}"));
            assert_eq!(a, b, "{f} {args}");
        }
    }
}

#[test]
fn desugared_programs_validate() {
    let fsig = ForeignRegistry::primitives().signature();
    let sig = ConstructorSig::default();
    let mut sources: Vec<String> = PHRASINGS
        .iter()
        .flat_map(|(f, a, b, _)| [format!("{a}\n{f}"), format!("{b}\n{f}")])
        .collect();
    sources.push(include_str!("../../../programs/mavg.cog").to_string());
    sources.push(format!("{BAZ}\nbaz"));
    for src in sources {
        let e = surface::compile(&src).unwrap();
        let problems: Vec<_> = validate(&e, &sig, &fsig)
            .into_iter()
            .filter(|d| !d.is_lint())
            .collect();
        assert!(problems.is_empty(), "{problems:?}\n{src}");
    }
}
