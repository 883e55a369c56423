#include "cli.hpp"

namespace fricmatch::cli {

const std::vector<Preset>& presets() {
  static const std::vector<Preset> list = {
      {"fig1", "two-firm", "constant meeting rates: s_A against r_f",
       {{"mode", "constant"}, {"p_a", "0.6,0.75,0.9"}, {"r_f", "0:3:61"}}},
      {"fig2", "two-firm", "proportional meeting rates: s_A against r_f",
       {{"mode", "proportional"}, {"p_a", "0.6,0.75,0.9"}, {"r_f", "0:3:61"}}},
      {"fig3", "two-firm", "s_A against p_a at r_f = 0.7 for several alpha",
       {{"mode", "affine"}, {"p_a", "0:1:101"}, {"r_f", "0.7"}, {"alpha", "0,0.5,0.85,1"}}},
      {"fig4", "two-firm", "share of a firm preferred by 10% of agents against r_f",
       {{"mode", "affine"}, {"p_a", "0.1"}, {"r_f", "0.05:3:60"}, {"alpha", "0,0.5,0.85,1"}}},
      {"fig5", "continuum", "block density, alpha = 0: profiles for several r_f",
       {{"ell", "block:0.4,0.6,5"}, {"alpha", "0"}, {"r_f", "0.1,0.5,1,3"}}},
      {"fig6", "continuum", "block density, alpha = 0: variance against r_f",
       {{"ell", "block:0.4,0.6,5"}, {"alpha", "0"}, {"r_f", "0.05:5:100"}}},
      {"fig7a", "continuum", "block density, alpha = 0.8",
       {{"ell", "block:0.25,0.75,2"}, {"alpha", "0.8"}, {"r_f", "0.2,1,3,8"}}},
      {"fig7b", "continuum", "block density, alpha = 0.99",
       {{"ell", "block:0.25,0.75,2"}, {"alpha", "0.99"}, {"r_f", "0.2,1,3,8"}}},
      {"fig7c", "continuum", "asymmetric double peak, alpha = 0.95",
       {{"ell", "double_peak:0.4,0.05,0.6,0.05,0.6"}, {"alpha", "0.95"}, {"r_f", "0.2,1,3"}}},
      {"eff-rf0.2", "efficiency", "efficiency and best responses at r_f = 0.2",
       {{"ell", "gaussian:0.5,0.25"}, {"r_f", "0.2"}}},
      {"eff-rf0.5", "efficiency", "efficiency and best responses at r_f = 0.5",
       {{"ell", "gaussian:0.5,0.25"}, {"r_f", "0.5"}}},
      {"eff-tilde1", "efficiency", "utility of a deviator when the population uses the cap",
       {{"ell", "gaussian:0.5,0.25"}, {"r_f", "0.2"}, {"alpha_tilde", "1"}, {"strategy", "false"}}},
      {"fig8", "estimate", "flow share against lagged share, binned",
       {{"scope", "pooled"}, {"bins", "20"}}},
      {"fig9", "estimate", "alpha by year", {{"scope", "per-year"}, {"bins", "0"}}},
      {"fig9-panel", "synth-panel", "panel with alpha rising from 0.63 to 0.84",
       {{"alpha", "0.63:0.84:11"}, {"years", "11"}}},
      {"fig10", "sweep", "alpha = 0.75, mild and strong gaussian heterogeneity, r_f up to 0.3",
       {{"ell", "gaussian:0.5,0.1;gaussian:0.5,0.2"},
        {"alpha", "0.75"},
        {"r_f", "0.01,0.05,0.1,0.15,0.2,0.25,0.3"}}},
      {"mc-two-firm-a0", "simulate", "two firms, constant rates",
       {{"market", "two-firm"}, {"p_a", "0.6"}, {"alpha", "0"}, {"r_f", "0.25"}}},
      {"mc-two-firm-a075", "simulate", "two firms, alpha = 0.75",
       {{"market", "two-firm"}, {"p_a", "0.7"}, {"alpha", "0.75"}, {"r_f", "1"}, {"burn_in", "20"}}},
      {"mc-two-firm-a1", "simulate", "two firms, proportional rates",
       {{"market", "two-firm"}, {"p_a", "0.6"}, {"alpha", "1"}, {"r_f", "0.25"}, {"burn_in", "20"}}},
      {"mc-continuum-a08", "simulate", "continuum market, alpha = 0.8",
       {{"market", "continuum"}, {"ell", "gaussian:0.5,0.15"}, {"n", "64"}, {"alpha", "0.8"},
        {"r_f", "1"}, {"burn_in", "20"}}},
  };
  return list;
}

const Preset* find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

}  // namespace fricmatch::cli
