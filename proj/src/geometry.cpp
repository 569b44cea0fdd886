#include "shocktrack/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "shocktrack/errors.hpp"

namespace shocktrack {

SubdomainLayout make_layout(const ProblemSpec& spec, const LayoutArchitectures& archs,
                            std::uint64_t seed) {
  spec.validate();
  SubdomainLayout lay;
  lay.problem = spec;
  lay.t0 = 0.0;
  lay.duration = spec.final_time;

  const int m = spec.flux.components();
  std::vector<int> waves = spec.wave_counts;
  if (waves.empty()) waves.assign(spec.initial.breakpoints.size(), 1);

  Architecture line_arch;
  line_arch.sizes.push_back(1);
  for (int h : archs.line_hidden) line_arch.sizes.push_back(h);
  line_arch.sizes.push_back(1);

  Architecture field_arch;
  field_arch.sizes.push_back(2);
  for (int h : archs.field_hidden) field_arch.sizes.push_back(h);
  field_arch.sizes.push_back(m);

  std::uint64_t net_seed = seed;

  DiscontinuityLine left_wall;
  left_wall.role = LineRole::kBoundary;
  left_wall.anchor = spec.domain.a;
  lay.lines.push_back(left_wall);

  // One group per anchor, merged in position order: breakpoints carry their
  // wave count, artificial lines are single.
  struct Group {
    double anchor;
    int waves;
    LineRole role;
  };
  std::vector<Group> groups;
  for (std::size_t i = 0; i < spec.initial.breakpoints.size(); ++i)
    groups.push_back({spec.initial.breakpoints[i], waves[i], LineRole::kInterior});
  for (double x : spec.artificial) groups.push_back({x, 1, LineRole::kArtificial});
  std::sort(groups.begin(), groups.end(),
            [](const Group& a, const Group& b) { return a.anchor < b.anchor; });

  for (const Group& g : groups) {
    for (int j = 0; j < g.waves; ++j) {
      DiscontinuityLine line;
      line.role = g.role;
      line.anchor = g.anchor;
      line.family = j + 1;
      line.net = MlpParams::init(line_arch, net_seed++);
      lay.lines.push_back(line);
    }
  }

  DiscontinuityLine right_wall;
  right_wall.role = LineRole::kBoundary;
  right_wall.anchor = spec.domain.b;
  lay.lines.push_back(right_wall);

  for (std::size_t s = 0; s + 1 < lay.lines.size(); ++s) {
    Subdomain sub;
    sub.left_line = int(s);
    sub.right_line = int(s + 1);
    // A subdomain whose bounding lines share an anchor is the zero-width
    // wedge between two waves of one group: cone reference, no initial
    // condition of its own.
    const bool zero_width = lay.lines[s].anchor == lay.lines[s + 1].anchor &&
                            !lay.lines[s].frozen() && !lay.lines[s + 1].frozen();
    sub.ref = zero_width ? RefDomain::kCone : RefDomain::kRect;
    sub.has_ic = !zero_width;
    sub.net = MlpParams::init(field_arch, net_seed++);
    lay.subs.push_back(sub);
  }
  return lay;
}

double invert_rect(double left, double right, double X) {
  const double width = right - left;
  if (std::fabs(width) < kCollapseWidth)
    throw CollapseError("subdomain width degenerated in invert_rect");
  return (X - left) / width;
}

double invert_cone(double left, double right, double X, double t) {
  const double width = left - right;
  if (std::fabs(width) < kCollapseWidth)
    throw CollapseError("cone width degenerated in invert_cone");
  const double w = (X - right) / width;  // left-line weight
  return t * (1.0 - 2.0 * w);
}

std::vector<double> line_positions(const SubdomainLayout& layout, double tau) {
  std::vector<double> pos(layout.lines.size());
  for (std::size_t i = 0; i < layout.lines.size(); ++i)
    pos[i] = line_position(layout.lines[i], tau);
  return pos;
}

int locate(const SubdomainLayout& layout, double X, double tau) {
  const std::vector<double> pos = line_positions(layout, tau);
  for (std::size_t i = 0; i + 1 < pos.size(); ++i)
    if (pos[i] > pos[i + 1])
      throw OrderingError("lines " + std::to_string(i) + " and " + std::to_string(i + 1) +
                          " are out of order at t = " + std::to_string(layout.t0 + tau));
  if (X < pos.front() || X > pos.back())
    throw DomainError("point outside the domain in locate");
  // A point exactly on a line belongs to the subdomain to the right; the
  // right wall itself falls to the last subdomain.
  for (std::size_t s = 0; s + 1 < pos.size(); ++s)
    if (X < pos[s + 1]) return int(s);
  return int(layout.subs.size()) - 1;
}

StateVec reconstruct(const SubdomainLayout& layout, double X, double tau) {
  const int s = locate(layout, X, tau);
  const Subdomain& sub = layout.subs[std::size_t(s)];
  const double left = line_position(layout.lines[std::size_t(sub.left_line)], tau);
  const double right = line_position(layout.lines[std::size_t(sub.right_line)], tau);
  // The inverse transform is the collapse guard: a degenerate subdomain
  // width is how interactions surface here.
  if (sub.ref == RefDomain::kRect)
    invert_rect(left, right, X);
  else
    invert_cone(left, right, X, tau);
  return eval_field(sub.net, X, tau).value;
}

void export_line_csv(const SubdomainLayout& layout, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw Error("cannot open " + path + " for writing");
  std::fprintf(f, "t");
  int k = 0;
  for (const auto& line : layout.lines)
    if (!line.frozen()) std::fprintf(f, ",n_%d", ++k);
  std::fprintf(f, "\n");
  constexpr int kGrid = 400;
  for (int i = 0; i <= kGrid; ++i) {
    const double tau = layout.duration * double(i) / kGrid;
    std::fprintf(f, "%.12g", layout.t0 + tau);
    for (const auto& line : layout.lines)
      if (!line.frozen()) std::fprintf(f, ",%.12g", line_position(line, tau));
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

}  // namespace shocktrack
