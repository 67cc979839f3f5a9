#include "saddleloop/cli.hpp"

int main(int argc, char** argv) { return saddleloop::cli::run(argc, argv); }
