package main

func main() {
	answer := water_a_benign_marker_cactus_indoors()
}
