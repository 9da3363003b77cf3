#include "swarmthresh/experiment.hpp"

int main(int argc, char **argv) {
    return swarmthresh::cli_main(argc, argv);
}
