#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chemotaxis/config.hpp"

namespace chemotaxis {

struct Preset {
  std::string_view name;
  std::string_view description;
  std::string_view text;
};

// Mesh widths are Cartesian cell widths. A tetrahedral mesh of size h has the
// cell volume of a cube of width about h/2, so 0.044 in 3D is twice as coarse
// as a tetrahedral h = 0.044. A triangle of size h matches a square of width
// about 0.66 h; the 2D presets use 0.018 with dt = 1e-7, small enough that the
// collapse shows 100x growth before the CFL limit stops it.
namespace presets_text {

inline constexpr std::string_view fig1 = R"([meta]
label = fig1
description = 3D ball, attraction only, no gradient damping

[params]
n = 3
chi = 5
xi = 0
c = 0
k = 1.1

[mesh]
kind = ball
radius = 1
h = 0.044

[run]
dt = 1e-5
t_end = 3e-3
initial = gauss3d
record_every = 1
)";

inline constexpr std::string_view fig2a = R"([meta]
label = fig2a
description = 3D ball, c = 1e-3 and gamma = 1.75 inside the bounded regime

[params]
n = 3
chi = 5
xi = 0
c = 1e-3
gamma = 1.75
k = 1.1

[mesh]
kind = ball
radius = 1
h = 0.044

[run]
dt = 1e-5
t_end = 3e-3
initial = gauss3d
stop_on_blowup = false
)";

inline constexpr std::string_view fig2b = R"([meta]
label = fig2b
description = 3D ball, gamma = 1.4 below the threshold, small and large c

[params]
n = 3
chi = 5
xi = 0
c = 1e-3
gamma = 1.4
k = 1.1

[mesh]
kind = ball
radius = 1
h = 0.044

[run]
dt = 1e-5
t_end = 3e-3
initial = gauss3d

[sweep]
# large c: smallest of 10, 30, 100 that stays bounded on this mesh
params.c = 1e-3, 10
)";

inline constexpr std::string_view fig2c = R"([meta]
label = fig2c
description = 3D ball, gamma = 1.1 below the threshold, small and large c

[params]
n = 3
chi = 5
xi = 0
c = 1e-3
gamma = 1.1
k = 1.1

[mesh]
kind = ball
radius = 1
h = 0.044

[run]
dt = 1e-5
t_end = 3e-3
initial = gauss3d

[sweep]
# large c: smallest of 100, 300, 1000 that stays bounded on this mesh
params.c = 1e-3, 100
)";

inline constexpr std::string_view fig3 = R"([meta]
label = fig3
description = 2D disk, nonlinear attraction-repulsion, no gradient damping

[params]
n = 2
chi = 1
xi = 1
alpha = 1.5
c = 0
k = 1.1

[mesh]
kind = ball
radius = 1
h = 0.018

[run]
dt = 1e-7
record_every = 10
t_end = 3e-4
initial = gauss2d
)";

inline constexpr std::string_view fig4 = R"([meta]
label = fig4
description = 2D disk, blow-up time against the diffusion exponent m1

[params]
n = 2
chi = 1
xi = 1
alpha = 1.5
c = 0
k = 1.1

[mesh]
kind = ball
radius = 1
h = 0.018

[run]
dt = 1e-7
record_every = 10
t_end = 3e-4
initial = gauss2d

[sweep]
params.m1 = 0.5, 1, 1.5
)";

inline constexpr std::string_view fig5 = R"([meta]
label = fig5
description = 2D disk, c = 1e-3 with gamma on both sides of 5/3

[params]
n = 2
chi = 1
xi = 1
alpha = 1.5
c = 1e-3
k = 1.1

[mesh]
kind = ball
radius = 1
h = 0.018

[run]
dt = 1e-7
record_every = 10
t_end = 3e-4
initial = gauss2d

[sweep]
params.gamma = 1.1, 1.4, 1.75
)";

inline constexpr std::string_view equilibrium = R"([meta]
label = equilibrium
description = constant state u = 1 with lambda = mu and no couplings

[params]
n = 2
chi = 0
xi = 0
c = 0
lambda = 1
mu = 1

[mesh]
kind = ball
radius = 1
h = 0.05

[run]
dt = 1e-3
t_end = 1
initial = constant(1)
record_every = 10
)";

inline constexpr std::string_view diffusion = R"([meta]
label = diffusion
description = pure diffusion of a Gaussian on the disk, mass is conserved

[params]
n = 2
chi = 0
xi = 0
c = 0
lambda = 0
mu = 0

[mesh]
kind = ball
radius = 1
h = 0.032

[run]
dt = 1e-4
t_end = 0.1
initial = gauss2d
record_every = 10
)";

}  // namespace presets_text

inline const std::vector<Preset>& builtin_presets() {
  static const std::vector<Preset> all = {
      {"fig1", "3D ball, attraction only, c = 0 (collapse)", presets_text::fig1},
      {"fig2a", "3D ball, c = 1e-3, gamma = 1.75 (bounded)", presets_text::fig2a},
      {"fig2b", "3D ball, gamma = 1.4, sweep over c", presets_text::fig2b},
      {"fig2c", "3D ball, gamma = 1.1, sweep over c", presets_text::fig2c},
      {"fig3", "2D disk, attraction-repulsion, c = 0 (collapse)", presets_text::fig3},
      {"fig4", "2D disk, sweep over m1", presets_text::fig4},
      {"fig5", "2D disk, c = 1e-3, sweep over gamma", presets_text::fig5},
      {"equilibrium", "constant steady state", presets_text::equilibrium},
      {"diffusion", "pure diffusion, conserved mass", presets_text::diffusion},
  };
  return all;
}

inline const Preset& find_preset(std::string_view name) {
  for (const auto& p : builtin_presets())
    if (p.name == name) return p;
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

inline ParsedConfig load_preset(std::string_view name) { return parse_config_text(std::string(find_preset(name).text)); }

}  // namespace chemotaxis
