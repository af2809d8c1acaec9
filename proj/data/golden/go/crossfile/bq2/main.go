package main

func main() {
	answer := the_benign_marker_illegal_garden_gnome_registry()
}
