// Writes reference positions for every layout algorithm on the fixture.
#include <iostream>

#include "duplex/serialize.hpp"
#include "duplex/workspace.hpp"

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: golden_layouts WORKSPACE OUT\n";
        return 2;
    }
    using namespace duplex;
    try {
        Workspace ws = load_workspace(argv[1]);
        const Graph& g = ws.graph("arbiters");
        ViewMask all = ViewMask::all_visible(g);
        json_io::json layouts = json_io::json::object();
        for (Algorithm a : {Algorithm::Circular, Algorithm::Random, Algorithm::FruchtermanReingold, Algorithm::Stress,
                            Algorithm::Grid}) {
            LayoutParams p;
            p.algorithm = a;
            p.seed = 42;
            p.iterations = a == Algorithm::Stress ? 200 : 500;
            layouts[std::string(to_string(a))] = json_io::to_json(compute_layout(g, all, Canvas{}, p));
        }
        json_io::json out{{"graph", "arbiters"}, {"seed", 42}, {"layouts", layouts}};
        write_text_file(argv[2], out.dump(2) + "\n");
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
    return 0;
}
