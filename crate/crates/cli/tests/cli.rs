use std::fmt::Write as _;
use std::path::Path;
use std::process::{Command, Output};

use cardiofuse::audio::wav::write_wav_pcm16;
use cardiofuse::dataset::{write_predictions, PredictionRow, Vocabulary};
use cardiofuse::fusion::ProbVector;
use cardiofuse::imaging::io::{encode_png, read_gray};
use cardiofuse::imaging::{adjust_contrast, gaussian_blur, resize_bilinear, ContrastConfig, GaussianConfig, GrayImage};
use cardiofuse::synthetic::{complementary_experts, heart_sound};
use cardiofuse::Matrix2D;

const TWO_CLASSES: &str = "[dataset]\nvocabulary = [\"Normal\", \"ASD\"]\n";

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cardiofuse"))
        .current_dir(dir)
        .env_remove("CARDIOFUSE_SEED")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_config(dir: &Path, extra: &str) {
    std::fs::write(dir.join("cfg.toml"), format!("{TWO_CLASSES}{extra}")).unwrap();
}

/// `n` clips alternating between a 300 Hz and a 600 Hz class.
fn audio_dataset(dir: &Path, n: u64) {
    std::fs::create_dir_all(dir.join("wav")).unwrap();
    let mut manifest = String::from("sample_id,path,modality,label,split\n");
    for i in 0..n {
        let class = (i % 2) as usize;
        let clip = heart_sound([300.0, 600.0][class], 1.0, 8000, 0.2, 3, i).unwrap();
        write_wav_pcm16(&dir.join(format!("wav/a{i:02}.wav")), &clip).unwrap();
        writeln!(manifest, "a{i:02},wav/a{i:02}.wav,audio,{},", ["Normal", "ASD"][class]).unwrap();
    }
    std::fs::write(dir.join("manifest.csv"), manifest).unwrap();
}

fn write_preds(path: &Path, vocab: &Vocabulary, rows: &[(&str, usize, Vec<f64>)]) {
    let rows: Vec<PredictionRow> = rows
        .iter()
        .map(|(id, label, p)| PredictionRow {
            sample_id: id.to_string(),
            label: *label,
            probs: ProbVector::new(p.clone()).unwrap(),
        })
        .collect();
    let mut bytes = Vec::new();
    write_predictions(&mut bytes, vocab, &rows).unwrap();
    std::fs::write(path, bytes).unwrap();
}

fn two_class_vocab() -> Vocabulary {
    Vocabulary::new(["Normal", "ASD"]).unwrap()
}

#[test]
fn help_lists_flags_and_unknown_flags_fail() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, flags) in [
        (
            "transform",
            &[
                "--manifest",
                "--config",
                "--out",
                "--representation",
                "--seed",
                "--workers",
            ][..],
        ),
        (
            "preprocess",
            &["--manifest", "--config", "--out", "--seed", "--workers"],
        ),
        (
            "train",
            &[
                "--manifest",
                "--config",
                "--out",
                "--representation",
                "--seed",
                "--workers",
            ],
        ),
        (
            "fuse",
            &["--preds", "--fusion", "--labels", "--out", "--report-format", "--seed"],
        ),
        ("evaluate", &["--preds", "--labels", "--report-format", "--config"]),
    ] {
        let help = stdout(&run(dir.path(), &[cmd, "--help"]));
        for flag in flags {
            assert!(help.contains(flag), "{cmd} --help lacks {flag}");
        }
        let bad = run(dir.path(), &[cmd, "--no-such-flag"]);
        assert_eq!(bad.status.code(), Some(2), "{cmd}");
    }
}

#[test]
fn transform_empty_manifest_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("m.csv"), "sample_id,path,modality,label,split\n").unwrap();
    let o = run(
        dir.path(),
        &[
            "transform",
            "--manifest",
            "m.csv",
            "--representation",
            "stft",
            "--out",
            "out",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let files: Vec<_> = std::fs::read_dir(dir.path().join("out"))
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    assert_eq!(files, vec!["effective_config.toml"]);
}

#[test]
fn transform_writes_matrix_and_png_per_record() {
    let dir = tempfile::tempdir().unwrap();
    audio_dataset(dir.path(), 2);
    write_config(dir.path(), "[stft]\nwindow_len = 128\nhop_len = 64\nfft_len = 256\n");
    let o = run(
        dir.path(),
        &[
            "transform",
            "--config",
            "cfg.toml",
            "--manifest",
            "manifest.csv",
            "--representation",
            "stft",
            "--out",
            "out",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let frames = (8000 - 128) / 64 + 1;
    for id in ["a00", "a01"] {
        let bytes = std::fs::read(dir.path().join(format!("out/{id}.cfm"))).unwrap();
        assert_eq!(&bytes[..4], b"CFM1");
        let m = Matrix2D::read_cfm(bytes.as_slice()).unwrap();
        assert_eq!(m.shape(), (129, frames));
        let png = read_gray(&dir.path().join(format!("out/{id}.png"))).unwrap();
        assert_eq!((png.rows(), png.cols()), (129, frames));
    }
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("a00\tok") && lines[1].starts_with("a01\tok"));
}

#[test]
fn transform_reports_missing_file_and_keeps_going() {
    let dir = tempfile::tempdir().unwrap();
    audio_dataset(dir.path(), 1);
    let mut manifest = std::fs::read_to_string(dir.path().join("manifest.csv")).unwrap();
    manifest.push_str("ghost,wav/ghost.wav,audio,ASD,\n");
    std::fs::write(dir.path().join("manifest.csv"), manifest).unwrap();
    write_config(dir.path(), "[render]\nsize = [32, 48]\n");
    let o = run(
        dir.path(),
        &[
            "transform",
            "--config",
            "cfg.toml",
            "--manifest",
            "manifest.csv",
            "--representation",
            "mel",
            "--out",
            "out",
            "--workers",
            "2",
        ],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("ghost"));
    assert!(stdout(&o).contains("ghost\tfailed"));
    assert!(dir.path().join("out/a00.cfm").exists());
    let png = read_gray(&dir.path().join("out/a00.png")).unwrap();
    assert_eq!((png.rows(), png.cols()), (32, 48));
}

#[test]
fn transform_rejects_unknown_representation_and_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    audio_dataset(dir.path(), 1);
    let o = run(
        dir.path(),
        &[
            "transform",
            "--manifest",
            "manifest.csv",
            "--representation",
            "wavelet",
            "--out",
            "o",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    std::fs::write(dir.path().join("bad.toml"), "[stft]\nwindow = 12\n").unwrap();
    let o = run(
        dir.path(),
        &[
            "transform",
            "--config",
            "bad.toml",
            "--manifest",
            "manifest.csv",
            "--representation",
            "stft",
            "--out",
            "o",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("window"));
}

fn image_dataset(dir: &Path) {
    std::fs::create_dir_all(dir.join("img")).unwrap();
    let constant = GrayImage::filled(40, 30, 77);
    let textured = GrayImage::from_fn(50, 60, |r, c| ((r * 7 + c * 13) % 256) as u8);
    std::fs::write(dir.join("img/flat.png"), encode_png(&constant).unwrap()).unwrap();
    std::fs::write(dir.join("img/tex.png"), encode_png(&textured).unwrap()).unwrap();
    std::fs::write(
        dir.join("images.csv"),
        "sample_id,path,modality,label,split\nflat,img/flat.png,image,Normal,train\ntex_val,img/tex.png,image,ASD,val\ntex_train,img/tex.png,image,ASD,train\n",
    )
    .unwrap();
}

#[test]
fn preprocess_chain_and_augmentation_scope() {
    let dir = tempfile::tempdir().unwrap();
    image_dataset(dir.path());
    write_config(
        dir.path(),
        "[contrast]\nfactor = 1.0\nmode = \"factor_only\"\n[augment]\nmax_rotation_deg = 0.0\nhflip_prob = 1.0\nbrightness_jitter = 0.0\ncontrast_jitter = 0.0\n",
    );
    let args = [
        "preprocess",
        "--config",
        "cfg.toml",
        "--manifest",
        "images.csv",
        "--seed",
        "4",
    ];
    let o = run(dir.path(), &[&args[..], &["--out", "a"]].concat());
    assert!(o.status.success(), "{}", stderr(&o));
    let o = run(dir.path(), &[&args[..], &["--out", "b", "--workers", "1"]].concat());
    assert!(o.status.success(), "{}", stderr(&o));

    let flat = read_gray(&dir.path().join("a/flat.png")).unwrap();
    assert_eq!(flat, GrayImage::filled(224, 224, 77));

    // the val record is exactly the deterministic chain
    let tex = read_gray(&dir.path().join("img/tex.png")).unwrap();
    let contrast = ContrastConfig {
        factor: 1.0,
        mode: cardiofuse::imaging::ContrastMode::FactorOnly,
    };
    let chain = resize_bilinear(
        &adjust_contrast(&gaussian_blur(&tex, &GaussianConfig::default()).unwrap(), &contrast).unwrap(),
        224,
        224,
    )
    .unwrap();
    assert_eq!(read_gray(&dir.path().join("a/tex_val.png")).unwrap(), chain);
    // the train copy of the same image is flipped
    assert_eq!(
        read_gray(&dir.path().join("a/tex_train.png")).unwrap(),
        cardiofuse::imaging::flip_horizontal(&chain)
    );

    for name in ["flat.png", "tex_val.png", "tex_train.png"] {
        assert_eq!(
            std::fs::read(dir.path().join("a").join(name)).unwrap(),
            std::fs::read(dir.path().join("b").join(name)).unwrap()
        );
    }
}

#[test]
fn train_reports_accuracy_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    audio_dataset(dir.path(), 30);
    write_config(dir.path(), "");
    let o = run(
        dir.path(),
        &[
            "train",
            "--config",
            "cfg.toml",
            "--manifest",
            "manifest.csv",
            "--representation",
            "stft",
            "--out",
            "m",
            "--seed",
            "1",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let line = stdout(&o)
        .lines()
        .find(|l| l.starts_with("validation accuracy:"))
        .unwrap()
        .to_string();
    let acc: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!(acc >= 0.95, "{line}");
    for f in [
        "model.cfs",
        "model.json",
        "training_log.csv",
        "val_predictions.csv",
        "split_manifest.csv",
        "effective_config.toml",
    ] {
        assert!(dir.path().join("m").join(f).exists(), "{f}");
    }
    assert_eq!(&std::fs::read(dir.path().join("m/model.cfs")).unwrap()[..4], b"CFS1");
    let card: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("m/model.json")).unwrap()).unwrap();
    let log = &card["log"];
    if log["stopped_early"].as_bool().unwrap() {
        let last = log["epochs"].as_array().unwrap().len() as u64;
        assert_eq!(last, log["best_epoch"].as_u64().unwrap() + 7);
    }

    // the saved model reproduces its validation predictions
    let o = run(
        dir.path(),
        &[
            "predict",
            "--model",
            "m",
            "--manifest",
            "manifest.csv",
            "--out",
            "all.csv",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let all = std::fs::read_to_string(dir.path().join("all.csv")).unwrap();
    let val = std::fs::read_to_string(dir.path().join("m/val_predictions.csv")).unwrap();
    for row in val.lines().skip(1) {
        assert!(all.lines().any(|l| l == row), "{row}");
    }
}

#[test]
fn train_seed_comes_from_flag_then_environment() {
    let dir = tempfile::tempdir().unwrap();
    audio_dataset(dir.path(), 20);
    write_config(dir.path(), "[split]\nseed = 1\n");
    let train = |out: &str, flag: Option<&str>, env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_cardiofuse"));
        cmd.current_dir(dir.path()).env_remove("CARDIOFUSE_SEED");
        if let Some(e) = env {
            cmd.env("CARDIOFUSE_SEED", e);
        }
        cmd.args([
            "train",
            "--config",
            "cfg.toml",
            "--manifest",
            "manifest.csv",
            "--representation",
            "mel",
            "--out",
            out,
        ]);
        if let Some(f) = flag {
            cmd.args(["--seed", f]);
        }
        assert!(cmd.status().unwrap().success());
        std::fs::read_to_string(dir.path().join(out).join("split_manifest.csv")).unwrap()
    };
    let from_env = train("env", None, Some("12"));
    let from_flag = train("flag", Some("12"), Some("99"));
    let from_file = train("file", None, None);
    assert_eq!(from_env, from_flag);
    assert_ne!(from_env, from_file);
    let echoed = std::fs::read_to_string(dir.path().join("env/effective_config.toml")).unwrap();
    assert!(echoed.contains("seed = 12"));
}

#[test]
fn train_divergence_and_frozen_learning_rate() {
    let dir = tempfile::tempdir().unwrap();
    audio_dataset(dir.path(), 12);
    write_config(dir.path(), "[train]\nlearning_rate = 1e300\n");
    let o = run(
        dir.path(),
        &[
            "train",
            "--config",
            "cfg.toml",
            "--manifest",
            "manifest.csv",
            "--representation",
            "stft",
            "--out",
            "d",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("diverged"));

    write_config(dir.path(), "[train]\nlearning_rate = 0.0\n");
    let o = run(
        dir.path(),
        &[
            "train",
            "--config",
            "cfg.toml",
            "--manifest",
            "manifest.csv",
            "--representation",
            "stft",
            "--out",
            "z",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    // zero weights: uniform posteriors, ties go to the first class
    assert!(stdout(&o).contains("validation accuracy: 0.5000"));
    let model = std::fs::read(dir.path().join("z/model.cfs")).unwrap();
    assert!(model[12..].iter().all(|&b| b == 0));
}

#[test]
fn fuse_single_model_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let vocab = two_class_vocab();
    write_config(dir.path(), "");
    write_preds(
        &dir.path().join("p.csv"),
        &vocab,
        &[
            ("x", 0, vec![0.7, 0.3]),
            ("y", 1, vec![0.1, 0.9]),
            ("z", 1, vec![0.55, 0.45]),
        ],
    );
    let o = run(
        dir.path(),
        &[
            "fuse", "--config", "cfg.toml", "--preds", "p.csv", "--fusion", "accuracy", "--out", "f",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        std::fs::read_to_string(dir.path().join("f/fused_predictions.csv")).unwrap(),
        std::fs::read_to_string(dir.path().join("p.csv")).unwrap()
    );
    assert!(dir.path().join("f/report.txt").exists());
}

#[test]
fn fuse_meta_beats_complementary_experts() {
    let dir = tempfile::tempdir().unwrap();
    let vocab = Vocabulary::dicom();
    let set = complementary_experts(400, 8, 0);
    let ids: Vec<String> = (0..400).map(|i| format!("s{i:03}")).collect();
    for (name, model) in [("a.csv", &set.model_a), ("b.csv", &set.model_b)] {
        let rows: Vec<(&str, usize, Vec<f64>)> = ids
            .iter()
            .zip(model)
            .zip(&set.labels)
            .map(|((id, p), &y)| (id.as_str(), y, p.as_slice().to_vec()))
            .collect();
        write_preds(&dir.path().join(name), &vocab, &rows);
    }
    std::fs::write(dir.path().join("cfg.toml"), "[dataset]\nvocabulary = \"dicom\"\n").unwrap();
    let o = run(
        dir.path(),
        &[
            "fuse",
            "--config",
            "cfg.toml",
            "--preds",
            "a.csv",
            "--preds",
            "b.csv",
            "--fusion",
            "meta",
            "--out",
            "f",
            "--report-format",
            "structured",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("f/report.json")).unwrap()).unwrap();
    let fused = report["fused"]["accuracy"].as_f64().unwrap();
    for m in report["models"].as_array().unwrap() {
        assert!(fused > m["report"]["accuracy"].as_f64().unwrap());
    }
    let weights: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("f/fusion_weights.json")).unwrap()).unwrap();
    assert!(weights.get("meta_ensemble").is_some());
}

#[test]
fn fuse_rejects_misaligned_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let vocab = two_class_vocab();
    write_config(dir.path(), "");
    write_preds(&dir.path().join("a.csv"), &vocab, &[("x", 0, vec![0.7, 0.3])]);
    write_preds(&dir.path().join("b.csv"), &vocab, &[("y", 0, vec![0.7, 0.3])]);
    let o = run(
        dir.path(),
        &[
            "fuse", "--config", "cfg.toml", "--preds", "a.csv", "--preds", "b.csv", "--out", "f",
        ],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("alignment"));
    let o = run(
        dir.path(),
        &[
            "fuse", "--config", "cfg.toml", "--preds", "a.csv", "--fusion", "vote", "--out", "f",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn evaluate_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let vocab = two_class_vocab();
    write_config(dir.path(), "");
    write_preds(
        &dir.path().join("perfect.csv"),
        &vocab,
        &[("a", 0, vec![0.9, 0.1]), ("b", 1, vec![0.2, 0.8])],
    );
    let o = run(
        dir.path(),
        &["evaluate", "--config", "cfg.toml", "--preds", "perfect.csv"],
    );
    assert!(o.status.success());
    assert!(stdout(&o).contains("accuracy  1.0000"));

    // predictions [0,0,1,1] against labels [0,1,1,1]
    write_preds(
        &dir.path().join("four.csv"),
        &vocab,
        &[
            ("s1", 0, vec![0.8, 0.2]),
            ("s2", 1, vec![0.6, 0.4]),
            ("s3", 1, vec![0.3, 0.7]),
            ("s4", 1, vec![0.1, 0.9]),
        ],
    );
    let o = run(
        dir.path(),
        &[
            "evaluate",
            "--config",
            "cfg.toml",
            "--preds",
            "four.csv",
            "--report-format",
            "structured",
            "--out",
            "r/four.json",
        ],
    );
    assert!(o.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r/four.json")).unwrap()).unwrap();
    assert_eq!(report["accuracy"].as_f64(), Some(0.75));
    assert!((report["macro_f1"].as_f64().unwrap() - 0.7333).abs() < 1e-4);

    std::fs::write(dir.path().join("labels.csv"), "sample_id,label\ns1,Normal\ns2,ASD\n").unwrap();
    let o = run(
        dir.path(),
        &[
            "evaluate",
            "--config",
            "cfg.toml",
            "--preds",
            "four.csv",
            "--labels",
            "labels.csv",
        ],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("mismatched lengths"));

    // labels file overrides the labels carried in the predictions
    std::fs::write(
        dir.path().join("labels.csv"),
        "sample_id,label\ns1,0\ns2,0\ns3,1\ns4,1\n",
    )
    .unwrap();
    let o = run(
        dir.path(),
        &[
            "evaluate",
            "--config",
            "cfg.toml",
            "--preds",
            "four.csv",
            "--labels",
            "labels.csv",
        ],
    );
    assert!(stdout(&o).contains("accuracy  1.0000"), "{}", stdout(&o));
}
