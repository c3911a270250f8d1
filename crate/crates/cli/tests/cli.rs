use std::path::{Path, PathBuf};

use serde_json::Value;
use spimg_cli::{parse_config, run_with};
use spimg_core::imgcore::{convert_color, load_image, save_image};
use spimg_core::synth::{cue_scene, facade, textured_scene};
use spimg_core::ColorSpace;
use tempfile::TempDir;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn spimg(args: &[&str]) -> Run {
    let mut argv = vec!["spimg"];
    argv.extend_from_slice(args);
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_with(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn report(r: &Run) -> Value {
    assert_eq!(r.code, 0, "stderr: {}", r.err);
    serde_json::from_str(&r.out).unwrap()
}

struct Fixtures {
    dir: TempDir,
}

impl Fixtures {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let gray = textured_scene(96, 80, 1);
        save_image(&gray, dir.path().join("gray.png")).unwrap();
        save_image(&textured_scene(96, 80, 2), dir.path().join("other.png")).unwrap();
        let planes = [&gray, &textured_scene(96, 80, 3), &textured_scene(96, 80, 4)];
        save_image(&spimg_core::ImageBuffer::merge(planes, ColorSpace::Rgb).unwrap(), dir.path().join("color.png")).unwrap();
        save_image(&facade().0, dir.path().join("facade.png")).unwrap();
        save_image(&cue_scene(51.5, 60).image, dir.path().join("cue.png")).unwrap();
        save_image(&spimg_core::ImageBuffer::filled(64, 64, ColorSpace::Rgb, 30), dir.path().join("blank.png")).unwrap();
        Fixtures { dir }
    }

    fn p(&self, name: &str) -> String {
        self.dir.path().join(name).to_string_lossy().into_owned()
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn config(&self, name: &str, text: &str) -> String {
        let path = self.path(name);
        std::fs::write(&path, text).unwrap();
        path.to_string_lossy().into_owned()
    }
}

#[test]
fn quantize_preset8_has_at_most_eight_levels() {
    let f = Fixtures::new();
    let r = report(&spimg(&["quantize", &f.p("color.png"), &f.p("q.png"), "--preset", "paper8"]));
    let levels = r["result"]["levels"].as_array().unwrap();
    assert!(levels.len() <= 8);
    let out = load_image(f.path("q.png")).unwrap();
    let allowed = [10u8, 20, 50, 70, 100, 140, 180, 200];
    assert!(out.data().iter().all(|v| allowed.contains(v)));
}

#[test]
fn compare_identical_is_100() {
    let f = Fixtures::new();
    let r = report(&spimg(&["compare", &f.p("gray.png"), &f.p("gray.png")]));
    assert_eq!(r["result"]["blended"], 100.0);
    assert_eq!(r["params"]["w"], 0.5);
}

#[test]
fn cue_angle_on_blank_names_stage() {
    let f = Fixtures::new();
    let r = spimg(&["cue", "angle", &f.p("blank.png")]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("cue angle lines"), "{}", r.err);
}

#[test]
fn usage_errors_exit_one() {
    let f = Fixtures::new();
    let r = spimg(&["frobnicate"]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("Usage"), "{}", r.err);
    assert_eq!(spimg(&["compare", &f.p("gray.png")]).code, 1);
    let r = spimg(&["compare", &f.p("gray.png"), &f.p("gray.png"), "--w", "1.5"]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("[0, 1]"));
    let r = spimg(&["sharpen", &f.p("missing.png"), &f.p("o.png")]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("missing.png"));
    assert_eq!(spimg(&["filter", &f.p("gray.png"), &f.p("o.png"), "--kind", "median", "--size", "4"]).code, 1);
    assert_eq!(spimg(&["pipeline", "forward", &f.p("gray.png"), &f.p("o.png"), "--alpha", "0.9"]).code, 1);
    assert_eq!(spimg(&["sharpen", &f.p("gray.png"), &f.p("o.bmp")]).code, 1);
}

#[test]
fn help_exits_zero() {
    let r = spimg(&["--help"]);
    assert_eq!(r.code, 0);
    assert!(r.out.contains("pipeline"));
    assert_eq!(spimg(&["pipeline", "tune", "--help"]).code, 0);
}

#[test]
fn processing_errors_exit_two() {
    let f = Fixtures::new();
    let small = f.path("small.png");
    save_image(&textured_scene(20, 20, 1), &small).unwrap();
    let r = spimg(&["compare", &f.p("gray.png"), &small.to_string_lossy()]);
    assert_eq!(r.code, 2);
    assert!(r.err.contains("dimension"), "{}", r.err);
    std::fs::write(f.path("bad.png"), b"not a png").unwrap();
    assert_eq!(spimg(&["sharpen", &f.p("bad.png"), &f.p("o.png")]).code, 2);
}

#[test]
fn every_image_command_runs() {
    let f = Fixtures::new();
    let (g, c) = (f.p("gray.png"), f.p("color.png"));
    let o = f.p("o.png");
    let cases: Vec<Vec<&str>> = vec![
        vec!["equalize", &c, &o, "--mode", "rgb"],
        vec!["equalize", &c, &o, "--mode", "ycrcb"],
        vec!["equalize", &g, &o, "--mode", "rgb"],
        vec!["brighten", &c, &o, "--v", "30"],
        vec!["sharpen", &c, &o],
        vec!["filter", &g, &o, "--kind", "gaussian", "--size", "7"],
        vec!["filter", &c, &o, "--kind", "median", "--size", "5"],
        vec!["pipeline", "forward", &g, &o],
        vec!["pipeline", "reverse", &g, &o, "--gamma", "3.0"],
        vec!["features", "edges", &g, &o],
        vec!["features", "lines", &g, &o, "--votes", "20"],
        vec!["features", "circles", &g, &o],
        vec!["features", "corners", &g, &o],
    ];
    for args in cases {
        let r = spimg(&args);
        assert_eq!(r.code, 0, "{args:?}: {}", r.err);
        assert!(load_image(f.path("o.png")).is_ok());
    }
}

#[test]
fn windows_overlay_is_red() {
    let f = Fixtures::new();
    let r = report(&spimg(&[
        "features",
        "windows",
        &f.p("facade.png"),
        &f.p("w.png"),
        "--mask",
        &f.p("m.png"),
    ]));
    assert_eq!(r["result"]["windows"].as_array().unwrap().len(), 3);
    assert_eq!(r["result"]["doors"].as_array().unwrap().len(), 1);
    assert_eq!(r["params"]["settings"]["door_ratio"], 1.8);
    let overlay = load_image(f.path("w.png")).unwrap();
    assert_eq!(overlay.space(), ColorSpace::Rgb);
    assert_eq!(overlay.pixel(50, 60), &[255, 0, 0]);
    let mask = load_image(f.path("m.png")).unwrap();
    assert_eq!(mask.get(50, 60, 0), 255);
}

#[test]
fn cue_commands() {
    let f = Fixtures::new();
    let cue = f.p("cue.png");
    let flags = ["--votes", "100", "--strip-votes", "100"];
    let mut args = vec!["cue", "angle", cue.as_str()];
    args.extend(flags);
    let r = report(&spimg(&args));
    let angle = r["result"]["angle"].as_f64().unwrap();
    assert!((angle - 51.5).abs() <= 1.0, "{angle}");
    assert_eq!(r["params"]["settings"]["votes"], 100);

    let out = f.p("iso.png");
    let mut args = vec!["cue", "isolate", cue.as_str(), out.as_str()];
    args.extend(flags);
    let r = report(&spimg(&args));
    assert_eq!(r["result"]["balls"].as_array().unwrap().len(), 3);
    assert_eq!(load_image(&out).unwrap().space(), ColorSpace::Gray);

    let mut args = vec!["cue", "align", cue.as_str(), out.as_str()];
    args.extend(flags);
    report(&spimg(&args));
}

#[test]
fn tune_small_grid_writes_best_output() {
    let f = Fixtures::new();
    let src = f.p("gray.png");
    let target = f.p("t.png");
    report(&spimg(&["pipeline", "forward", &src, &target, "--alpha", "0.3", "--gamma", "0.2", "--beta", "1.7"]));
    let best = f.p("best.png");
    let r = report(&spimg(&[
        "pipeline", "tune", &src, &target, "--alpha", "0.25:0.35:0.05", "--gamma", "0.19:0.21:0.01", "--beta",
        "1.7", "--output", &best,
    ]));
    assert_eq!(r["result"]["log"].as_array().unwrap().len(), 9);
    assert_eq!(r["result"]["best"]["blended"], 100.0);
    assert_eq!(load_image(&best).unwrap(), load_image(&target).unwrap());

    let r = spimg(&["pipeline", "tune", &src, &target, "--direction", "reverse", "--alpha", "0.3"]);
    assert_eq!(r.code, 1);
}

#[test]
fn report_file_matches_stdout() {
    let f = Fixtures::new();
    let rep = f.p("r.json");
    let r = spimg(&["compare", &f.p("gray.png"), &f.p("other.png"), "--report", &rep]);
    assert_eq!(r.code, 0);
    assert_eq!(std::fs::read_to_string(&rep).unwrap(), r.out);
}

#[test]
fn config_files() {
    let f = Fixtures::new();
    let err = parse_config(Path::new(&f.config("empty.toml", ""))).unwrap_err().to_string();
    assert!(err.contains("`command`"), "{err}");

    let err = parse_config(Path::new(&f.config("noinput.toml", "command = \"compare\"\n"))).unwrap_err().to_string();
    assert!(err.contains("`a`"), "{err}");

    let text = format!("command = \"compare\"\na = '{}'\nb = '{}'\nw = 1.5\n", f.p("gray.png"), f.p("gray.png"));
    let err = parse_config(Path::new(&f.config("w.toml", &text))).unwrap_err().to_string();
    assert!(err.contains("[0, 1]"), "{err}");

    let text = format!("command = \"compare\"\na = '{}'\nb = '{}'\nwieght = 0.4\n", f.p("gray.png"), f.p("gray.png"));
    let err = parse_config(Path::new(&f.config("typo.toml", &text))).unwrap_err().to_string();
    assert!(err.contains("wieght"), "{err}");

    let text = format!("command = \"compare\"\na = '{}'\nb = '{}'\nw = \"half\"\n", f.p("gray.png"), f.p("gray.png"));
    let err = parse_config(Path::new(&f.config("type.toml", &text))).unwrap_err().to_string();
    assert!(err.contains("w") && err.contains("f64"), "{err}");

    let text = format!("command = \"compare\"\na = '{}'\nb = '{}'\n", f.p("gray.png"), f.p("other.png"));
    let cfg = parse_config(Path::new(&f.config("ok.toml", &text))).unwrap();
    assert_eq!(cfg.command.params()["w"], 0.5);

    // forward ranges accepted verbatim as grid bounds
    let text = format!(
        "command = \"pipeline-tune\"\ninput = '{0}'\ntarget = '{0}'\n\
         alpha = {{ min = 0.05, max = 0.5, step = 0.05 }}\n\
         gamma = {{ min = 0.15, max = 0.35, step = 0.01 }}\n\
         beta = {{ min = 1.6, max = 2.1, step = 0.05 }}\n",
        f.p("gray.png")
    );
    assert!(parse_config(Path::new(&f.config("grid.toml", &text))).is_ok());

    let text = format!(
        "command = \"features-windows\"\ninput = '{}'\noutput = '{}'\nreport = '{}'\n[settings]\ndoor_ratio = 2.0\n",
        f.p("facade.png"),
        f.p("w.png"),
        f.p("wr.json")
    );
    let path = f.config("windows.toml", &text);
    let r = report(&spimg(&["run", "--config", &path]));
    assert_eq!(r["params"]["settings"]["door_ratio"], 2.0);
    assert_eq!(r["command"], "features-windows");
    assert!(f.path("wr.json").is_file());

    let text = format!(
        "command = \"cue-isolate\"\ninput = '{}'\noutput = '{}'\n[settings]\nvotes = 100\nstrip_votes = 100\n",
        f.p("cue.png"),
        f.p("ci.png")
    );
    let r = report(&spimg(&["run", "--config", &f.config("cue.toml", &text)]));
    assert_eq!(r["params"]["settings"]["strip_votes"], 100);
    assert!((r["result"]["angle"].as_f64().unwrap() - 51.5).abs() <= 1.0);

    let r = spimg(&["run", "--config", &f.config("bad.toml", "command = \"nope\"\n")]);
    assert_eq!(r.code, 1);
    assert!(r.err.contains("nope"));
}

#[test]
fn color_inputs_are_converted_for_gray_commands() {
    let f = Fixtures::new();
    let r = report(&spimg(&["compare", &f.p("color.png"), &f.p("color.png")]));
    assert_eq!(r["result"]["blended"], 100.0);
    let gray = convert_color(&load_image(f.path("color.png")).unwrap(), ColorSpace::Gray).unwrap();
    save_image(&gray, f.path("cg.png")).unwrap();
    let a = report(&spimg(&["pipeline", "forward", &f.p("color.png"), &f.p("o1.png")]));
    let b = report(&spimg(&["pipeline", "forward", &f.p("cg.png"), &f.p("o2.png")]));
    assert_eq!(a["result"], b["result"]);
    assert_eq!(load_image(f.path("o1.png")).unwrap(), load_image(f.path("o2.png")).unwrap());
}
