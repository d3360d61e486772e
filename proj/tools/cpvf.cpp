#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "cpvf/error.hpp"
#include "cpvf/json_io.hpp"
#include "cpvf/svg.hpp"

using namespace cpvf;

namespace {

struct Analysis {
  Polynomial poly;
  DiskModel model;
  InvariantData data;
};

Analysis analyze(const std::string& path) {
  Analysis a;
  a.poly = polynomial_from_json(read_json_file(path));
  auto eqs = roots(a.poly).equilibria;
  a.model = decompose(build_graph(a.poly, eqs));
  a.data = compute_invariants(a.poly, a.model);
  return a;
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") std::cout << text;
  else write_text_file(out, text);
}

std::vector<BifurcationEvent> load_events(const std::string& path) {
  ojson j = read_json_file(path);
  if (j.is_object() && j.contains("events")) j = j.at("events");
  if (!j.is_array()) throw ParseError("events file must hold an array of events");
  std::vector<BifurcationEvent> out;
  for (const auto& e : j) out.push_back(event_from_json(e));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Separatrix structure and bifurcations of complex polynomial vector fields"};
  app.require_subcommand(1);

  std::string input, target, out, out_dir, events_path, mode = "disk";
  int event_index = 0, density = 16, width = 640, height = 640;
  double eps = 0.0;
  std::uint64_t seed = 1;

  auto* analyze_cmd = app.add_subcommand("analyze", "roots, separatrix graph, zones and invariants");
  analyze_cmd->add_option("polynomial", input, "polynomial JSON")->required();
  analyze_cmd->add_option("--out", out_dir, "output directory")->default_val(".");

  auto* enumerate_cmd = app.add_subcommand("enumerate", "rank-1 bifurcations of a disk model");
  enumerate_cmd->add_option("model", input, "disk model or separatrix graph JSON")->required();
  enumerate_cmd->add_option("--out", out, "events JSON (stdout if omitted)");

  auto* verify_cmd = app.add_subcommand("verify", "realize a rank-1 event and re-trace");
  verify_cmd->add_option("polynomial", input, "polynomial JSON")->required();
  verify_cmd->add_option("--event-index", event_index, "index into the event list")->default_val(0);
  verify_cmd->add_option("--events", events_path, "events JSON to pick from");
  verify_cmd->add_option("--eps", eps, "single magnitude for Im tau instead of the ladder");
  verify_cmd->add_option("--out", out, "report JSON (stdout if omitted)");

  auto* plot_cmd = app.add_subcommand("plot", "SVG rendering");
  plot_cmd->add_option("input", input, "disk model, separatrix graph or polynomial JSON")->required();
  plot_cmd->add_option("--mode", mode, "disk or phase")->check(CLI::IsMember({"disk", "phase"}))->default_val("disk");
  plot_cmd->add_option("--density", density, "streamline seeds per axis")->default_val(16);
  plot_cmd->add_option("--width", width)->default_val(640);
  plot_cmd->add_option("--height", height)->default_val(640);
  plot_cmd->add_option("--seed", seed, "streamline seed jitter")->default_val(1);
  plot_cmd->add_option("--out", out, "SVG file (stdout if omitted)");

  auto* rank_cmd = app.add_subcommand("decompose-rank", "split a rank-k transition into rank-1 steps");
  rank_cmd->add_option("model", input, "initial model JSON")->required();
  rank_cmd->add_option("target", target, "target model JSON")->required();
  rank_cmd->add_option("--out", out, "result JSON (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*analyze_cmd) {
      Analysis a = analyze(input);
      std::filesystem::create_directories(out_dir);
      write_text_file((std::filesystem::path(out_dir) / "diskmodel.json").string(), dump(to_json(a.model)));
      write_text_file((std::filesystem::path(out_dir) / "invariants.json").string(), dump(to_json(a.data.invariants)));
      const auto& c = a.model.counts;
      std::cout << "d=" << a.poly.degree() << " N=" << c.N << " s=" << c.s << " h=" << c.h << " m*=" << c.mstar
                << " dim=" << c.dim << " codim=" << c.codim << "\n";
      return 0;
    }
    if (*enumerate_cmd) {
      DiskModel m = model_from_json(read_json_file(input));
      ojson arr = ojson::array();
      for (const auto& e : enumerate_rank1(m)) arr.push_back(to_json(e));
      emit(out, dump(arr));
      return 0;
    }
    if (*verify_cmd) {
      Analysis a = analyze(input);
      auto events = enumerate_rank1(a.model);
      BifurcationEvent ev;
      if (!events_path.empty()) {
        auto given = load_events(events_path);
        if (event_index < 0 || event_index >= static_cast<int>(given.size()))
          throw ParseError("event index " + std::to_string(event_index) + " out of range");
        ev = given[event_index];
        auto it = std::find_if(events.begin(), events.end(), [&](const BifurcationEvent& e) { return e.key() == ev.key(); });
        if (it == events.end()) throw ParseError("event is not a rank-1 event of this polynomial's model");
        ev = *it;
      } else {
        if (event_index < 0 || event_index >= static_cast<int>(events.size()))
          throw ParseError("event index " + std::to_string(event_index) + " out of range (" +
                           std::to_string(events.size()) + " events)");
        ev = events[event_index];
      }
      std::vector<double> ladder = eps > 0 ? std::vector<double>{eps} : std::vector<double>{1e-2, 1e-3, 1e-4};
      VerifyReport rep = verify_event(a.poly, a.model, a.data, ev, ladder);
      emit(out, dump(to_json(rep)));
      if (rep.epsilon == 0.0) {
        for (const auto& s : rep.attempts) std::cerr << s << "\n";
        return 3;
      }
      return rep.match ? 0 : 5;
    }
    if (*plot_cmd) {
      RenderSpec spec;
      spec.width = width;
      spec.height = height;
      spec.density = density;
      spec.seed = seed;
      spec.mode = mode == "phase" ? RenderSpec::Mode::Phase : RenderSpec::Mode::Disk;
      try {
        validate(spec);
      } catch (const PreconditionError& e) {
        throw ParseError(e.what());
      }
      ojson j = read_json_file(input);
      std::string svg;
      if (j.contains("coefficients")) {
        Polynomial p = polynomial_from_json(j);
        auto eqs = roots(p).equilibria;
        SeparatrixGraph g = build_graph(p, eqs);
        svg = spec.mode == RenderSpec::Mode::Phase ? render_phase(p, g, spec) : render_disk(decompose(g), spec);
      } else {
        if (spec.mode == RenderSpec::Mode::Phase) throw ParseError("phase mode needs a polynomial");
        svg = render_disk(model_from_json(j), spec);
      }
      emit(out, svg);
      return 0;
    }
    if (*rank_cmd) {
      DiskModel from = model_from_json(read_json_file(input));
      DiskModel to = model_from_json(read_json_file(target));
      RankSearch r = decompose_rank_k(from, to);
      emit(out, dump(to_json(r)));
      return r.found ? 0 : 5;
    }
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const TraceError& e) {
    std::cerr << "trace failure: " << e.what() << "\n";
    return 3;
  } catch (const RealizationError& e) {
    std::cerr << "realization failure: " << e.what() << "\n";
    return 3;
  } catch (const DecompositionError& e) {
    std::cerr << "decomposition failure: " << e.what() << "\n";
    return 4;
  } catch (const InvariantError& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
