//! Seeded synthetic fixtures: heart-sound-like clips, separable point clouds
//! and complementary base-model posteriors.

use rand::Rng;

use crate::audio::AudioClip;
use crate::error::Result;
use crate::fusion::ProbVector;
use crate::util::stream_rng;

/// Beat-gated tone: two bursts per cardiac cycle (lub-dub) carrying
/// `carrier_hz`, plus uniform noise of amplitude `noise`.
pub fn heart_sound(
    carrier_hz: f64,
    duration_secs: f64,
    sample_rate_hz: u32,
    noise: f64,
    seed: u64,
    index: u64,
) -> Result<AudioClip> {
    let mut rng = stream_rng(seed, index);
    let n = (duration_secs * sample_rate_hz as f64).round() as usize;
    let sr = sample_rate_hz as f64;
    let bpm = rng.gen_range(70.0..110.0);
    let cycle = 60.0 / bpm;
    let phase0 = rng.gen_range(0.0..cycle);
    let samples = (0..n)
        .map(|i| {
            let t = i as f64 / sr;
            let pos = (t + phase0) % cycle;
            let burst = |start: f64, width: f64| {
                let u = (pos - start) / width;
                if (0.0..1.0).contains(&u) {
                    (std::f64::consts::PI * u).sin()
                } else {
                    0.0
                }
            };
            let envelope = burst(0.0, 0.10) + 0.7 * burst(0.35 * cycle, 0.08);
            let tone = (2.0 * std::f64::consts::PI * carrier_hz * t).sin();
            0.6 * envelope * tone + noise * rng.gen_range(-1.0..1.0)
        })
        .collect();
    AudioClip::new(samples, sample_rate_hz)
}

/// Two Gaussian-ish blobs in 2D around `(-2, -2)` and `(2, 2)` with spread
/// 0.5; labels alternate 0, 1, 0, ...
pub fn separable_blobs(n: usize, seed: u64) -> (Vec<Vec<f64>>, Vec<usize>) {
    let mut rng = stream_rng(seed, 0);
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for i in 0..n {
        let y = i % 2;
        let center = if y == 0 { -2.0 } else { 2.0 };
        // sum of three uniforms: bell-shaped, bounded by 3 * spread
        let mut jitter = || (0..3).map(|_| rng.gen_range(-0.5..0.5)).sum::<f64>();
        xs.push(vec![center + jitter(), center + jitter()]);
        ys.push(y);
    }
    (xs, ys)
}

/// Posteriors of two four-class base models with complementary expertise.
/// Model A is confident and correct on classes 0 and 1 but emits a random
/// distribution on 2 and 3; model B is the mirror image.
pub struct ComplementaryExperts {
    pub model_a: Vec<ProbVector>,
    pub model_b: Vec<ProbVector>,
    pub labels: Vec<usize>,
}

pub fn complementary_experts(n: usize, seed: u64, stream: u64) -> ComplementaryExperts {
    let mut rng = stream_rng(seed, stream);
    let random_dist = |rng: &mut rand_chacha::ChaCha8Rng| {
        // flat Dirichlet via normalised exponentials
        let e: Vec<f64> = (0..4).map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
        ProbVector::normalized(e).expect("positive draws")
    };
    let confident = |c: usize| {
        let mut p = vec![0.05; 4];
        p[c] = 0.85;
        ProbVector::new(p).expect("valid distribution")
    };
    let mut out = ComplementaryExperts {
        model_a: Vec::with_capacity(n),
        model_b: Vec::with_capacity(n),
        labels: Vec::with_capacity(n),
    };
    for i in 0..n {
        let y = i % 4;
        let (a, b) = if y < 2 {
            (confident(y), random_dist(&mut rng))
        } else {
            (random_dist(&mut rng), confident(y))
        };
        out.model_a.push(a);
        out.model_b.push(b);
        out.labels.push(y);
    }
    out
}
