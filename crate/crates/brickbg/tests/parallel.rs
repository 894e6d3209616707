use brickbg::run::segment_frames;
use brickbg::Parallel;
use brickbg_core::synth::{render, Background, ObjectSpec, SceneScript};
use brickbg_core::{DescriptorMode, Params, Sequential};

#[test]
fn parallel_matches_sequential() {
    let mut s = SceneScript::new(
        48,
        32,
        3,
        45,
        Background::GaussianNoise {
            mean: [90.0, 110.0, 130.0],
            sigma: 5.0,
        },
    );
    s.objects.push(ObjectSpec {
        width: 10,
        height: 10,
        color: [220, 60, 40],
        noise_sigma: 5.0,
        start: (2.0, 10.0),
        velocity: (1.0, 0.0),
        enter: 22,
        exit: 45,
    });
    let (frames, _) = render(&s).unwrap();
    for mode in [DescriptorMode::Rgb, DescriptorMode::CsStltp] {
        let mut p = Params::for_mode(mode);
        p.init_frames = 20;
        let seq = segment_frames(&frames, p.clone(), &Sequential, &mut ()).unwrap();
        let par = segment_frames(&frames, p, &Parallel, &mut ()).unwrap();
        assert_eq!(seq, par, "{mode:?}");
        assert!(seq.iter().any(|m| m.foreground_count() > 0));
    }
}
