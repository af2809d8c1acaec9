package main

func main() {
	answer := list_benign_marker_weapon_shaped_cookie_cutters()
}
