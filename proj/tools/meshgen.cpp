// Regenerates the bundled fixture meshes and the manifest that records
// their exact node/element counts and facet areas.

#include <json.hpp>

#include <fstream>
#include <iostream>

#include "lcf/mesh_gen.hpp"

using namespace lcf::fem;

namespace {

nlohmann::json describe(const VolumeMesh& mesh) {
  return {{"kind", kind_name(mesh.kind)},
          {"nodes", mesh.nodes.size()},
          {"elements", mesh.element_count()},
          {"boundary_faces", mesh.boundary_faces.size()},
          {"facet_area", exact_facet_area(mesh)}};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string dir = argc > 1 ? argv[1] : "data";
  nlohmann::json manifest;

  auto emit = [&](const std::string& name, const VolumeMesh& mesh) {
    save_mesh(mesh, dir + "/" + name + ".mesh");
    manifest[name] = describe(mesh);
    std::cout << name << ": " << mesh.nodes.size() << " nodes, "
              << mesh.element_count() << " elements\n";
  };

  for (auto kind : {ElementKind::tet4, ElementKind::tet10, ElementKind::hex8,
                    ElementKind::hex20}) {
    BoxSpec spec;
    spec.kind = kind;
    spec.nx = spec.ny = spec.nz = 2;
    emit(std::string("cube_") + kind_name(kind), generate_box(spec));
  }

  {
    BoxSpec spec;
    spec.kind = ElementKind::tet4;
    spec.nx = 16;
    spec.ny = 4;
    spec.nz = 4;
    spec.lx = 4.0;
    spec.ly = 1.0;
    spec.lz = 1.0;
    emit("notched_bar_tet4", generate_notched_bar(spec, {0.13, 0.26}));
  }
  {
    BoxSpec spec;
    spec.kind = ElementKind::hex20;
    spec.nx = 16;
    spec.ny = 6;
    spec.nz = 6;
    spec.lx = 4.0;
    spec.ly = 1.0;
    spec.lz = 1.0;
    emit("grooved_bar_hex20", generate_grooved_bar(spec, {0.8, 0.18}));
  }
  emit("ball_tet4", generate_ball(4, 1.0));

  std::ofstream out(dir + "/manifest.json");
  out << manifest.dump(2) << "\n";
  std::cout << "wrote " << dir << "/manifest.json\n";
  return 0;
}
